"""Run selected suites over a grid of (q, r) and print one line per check."""
from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass, field

from ellqa.config import SuiteConfig
from ellqa.runner import run_suites


@dataclass(frozen=True)
class Sweep:
    qs: tuple[float, ...] = (0.3, 0.5, 0.7)
    rs: tuple[float, ...] = (3.1, 4.0, 5.7)
    c: float = 1.0
    n_samples: int = 20
    suites: tuple[str, ...] = field(default=("qseries", "rmatrix"))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", action="append")
    ap.add_argument("--samples", type=int, default=20)
    args = ap.parse_args()
    sw = Sweep(n_samples=args.samples, suites=tuple(args.suite or Sweep.suites))
    for q, r in itertools.product(sw.qs, sw.rs):
        cfg = SuiteConfig(q=q, r=r, c=sw.c, n_samples=sw.n_samples, suites=sw.suites)
        for rep in run_suites(cfg):
            print(f"q={q} r={r} {rep.line()}")


if __name__ == "__main__":
    main()
