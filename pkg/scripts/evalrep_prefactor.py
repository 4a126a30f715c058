"""Triple-k factorization residual with and without the z^{1/r} prefactor of rho^+."""
from __future__ import annotations

from ellqa.context import EllipticContext
from ellqa.evalrep import check_psi_factorization

for r in (3.5, 4.0, 4.3, 5.0, 6.0):
    rep = check_psi_factorization(EllipticContext(0.5, r, 0.0), 30)
    print(f"r={r:<4} full {rep.max_residual:.3e}  product part {rep.notes['residual_without_rho_prefactor']:.3e}")
