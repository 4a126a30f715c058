"""Recompute the constants frozen in the tests from the independent oracles."""
from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import oracles  # noqa: E402

print("POCH_QUARTER =", oracles.poch(0.25, (0.25,), 400).real)
print("CURLY_Q2_AT_04_3 =", oracles.curly(0.16, 0.4, 0.4**6, 240).real)
print("RHO_PLUS_AT_02_01 =", oracles.rho_plus(0.2 + 0.1j, 0.5, 4.0, 120))
print("R00_AT_023_071 =", oracles.rbar_00_00(0.23, 0.71, 0.5, 4.0, 400).real)
print("TRIG_J, TRIG_N, TRIG_F =", oracles.trig_jnf(0.3, 0.5))
