"""Command line: list checks, run suites, evaluate single functions."""
from __future__ import annotations

import argparse
import json
import sys

from .config import SUITES, load_config
from .context import BracketKind, EllipticContext

EVAL_FNS = ("bracket", "theta", "curly", "rho_plus", "rho", "mu", "mu_star", "chi", "kappa", "kappa_prime",
            "g_const")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--cutoff", dest="product_cutoff", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellqa", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    ls = sub.add_parser("list", help="print the check registry with anchors")
    ls.add_argument("--suite", action="append", choices=("all",) + SUITES)

    run = sub.add_parser("run", help="run check suites and emit a report")
    run.add_argument("--config", help="key=value file; flags override it")
    _add_params(run)
    run.add_argument("--tol", type=float)
    run.add_argument("--samples", dest="n_samples", type=int)
    run.add_argument("--order", dest="series_order", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--suite", action="append", choices=("all",) + SUITES)
    run.add_argument("--check", action="append", help="restrict to exact check names")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--format", choices=("json", "text"), default="text")
    run.add_argument("--quiet", action="store_true", help="no progress lines on stderr")

    ev = sub.add_parser("eval", help="evaluate one function")
    ev.add_argument("--fn", required=True, choices=EVAL_FNS)
    _add_params(ev)
    ev.add_argument("--u", type=complex, help="additive variable, z = q^{2u}")
    ev.add_argument("--z", type=complex, help="multiplicative variable")
    ev.add_argument("--kind", choices=[k.name.lower() for k in BracketKind], default="plain")
    ev.add_argument("--starred", action="store_true")
    return ap


def _cmd_list(args) -> int:
    from .runner import registry

    suites = None if not args.suite or "all" in args.suite else args.suite
    for chk in registry(suites):
        print(f"{chk.suite}\t{chk.name}\t{chk.anchor}")
    return 0


def _cmd_run(args) -> int:
    from .runner import emit_report, run_suites

    overrides = {k: getattr(args, k) for k in ("q", "r", "c", "tol", "n_samples", "series_order",
                                                "product_cutoff", "seed")}
    if args.suite:
        overrides["suites"] = tuple(args.suite)
    cfg = load_config(args.config, overrides)
    progress = None if args.quiet or (args.out is None and args.format == "text") else (
        lambda rep: print(rep.line(), file=sys.stderr))
    reports = run_suites(cfg, names=args.check, progress=progress)
    text = emit_report(cfg, reports, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0 if all(r.passed for r in reports) else 1


def evaluate(fn: str, ctx: EllipticContext, u=None, z=None, kind: str = "plain", starred: bool = False):
    from . import qseries, structfuncs

    if u is None and z is not None and fn not in ("theta", "curly"):
        import cmath

        u = cmath.log(z) / (2 * ctx.log_q)
    if z is None and u is not None:
        z = ctx.z_of(u)
    needs = {"bracket": u, "theta": z, "curly": z, "rho_plus": u, "rho": u, "mu": u, "mu_star": u, "chi": u}
    if fn in needs and needs[fn] is None:
        raise ValueError(f"--fn {fn} needs --u or --z")
    if fn == "bracket":
        return qseries.bracket(u, BracketKind[kind.upper()], ctx)
    if fn == "theta":
        return qseries.theta_p(z, ctx.p_star if starred else ctx.p, ctx)
    if fn == "curly":
        return qseries.curly(z, ctx, starred)
    if fn == "rho_plus":
        return structfuncs.rho_plus(u, ctx, starred)
    if fn == "mu_star":
        return structfuncs.mu(u, ctx, True)
    if fn in ("rho", "mu", "chi"):
        return getattr(structfuncs, fn)(u, ctx)
    return getattr(structfuncs, fn)(ctx)


def _cmd_eval(args) -> int:
    ctx = EllipticContext(q=0.5 if args.q is None else args.q, r=4.0 if args.r is None else args.r,
                          c=1.0 if args.c is None else args.c, product_cutoff=args.product_cutoff)
    val = complex(evaluate(args.fn, ctx, args.u, args.z, args.kind, args.starred))
    print(json.dumps({"fn": args.fn, "q": ctx.q, "r": ctx.r, "c": ctx.c, "value": [val.real, val.imag]}))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {"list": _cmd_list, "run": _cmd_run, "eval": _cmd_eval}[args.cmd](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
