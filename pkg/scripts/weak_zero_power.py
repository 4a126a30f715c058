"""Weak-zero and G-residue residuals as the power of [1]* in the second term varies."""
from __future__ import annotations

from ellqa.context import EllipticContext
from ellqa.identities import check_appc_weak_zero, check_g_residues

for c in (1.0, 0.0):
    ctx = EllipticContext(0.5, 4.0, c)
    for k in (1, 2, 3, 4):
        w = check_appc_weak_zero(ctx, 30, one_power=k)
        g = check_g_residues(ctx, 3, one_power=k)
        print(f"c={c} power={k} weak-zero {w.max_residual:.3e}  residues {g.max_residual:.3e}")
