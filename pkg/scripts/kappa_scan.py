"""Normal-ordering constant versus the closed-form products, across levels."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from ellqa.bosonope.checks import kappa_closed_form, kappa_routes
from ellqa.context import EllipticContext
from ellqa.structfuncs import kappa, kappa_prime


@dataclass(frozen=True)
class Scan:
    q: float = 0.5
    r: float = 4.0
    levels: tuple[float, ...] = (0.0, 0.25, 0.5, 1.0, 1.5)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=float, default=Scan.q)
    ap.add_argument("--r", type=float, default=Scan.r)
    args = ap.parse_args()
    scan = Scan(args.q, args.r)
    print("c  kappa(ordered)  kappa(resummed)  kappa(closed)  kappa'(ordered)  kappa'(closed)")
    for c in scan.levels:
        ctx = EllipticContext(scan.q, scan.r, c)
        (k1, _, _), (k2, _, _) = kappa_routes(ctx)
        print(f"{c:<4} {k1.real:.12f} {kappa_closed_form(ctx).real:.12f} {kappa(ctx).real:.12f} "
              f"{k2.real:.12f} {kappa_prime(ctx).real:.12f}")


if __name__ == "__main__":
    main()
