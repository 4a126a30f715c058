"""Check registry, suite execution and report emission."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import evalrep, identities, qseries, rmatrix, structfuncs
from .bosonope import catalog, checks
from .config import SuiteConfig
from .report import CheckReport


@dataclass(frozen=True)
class RegisteredCheck:
    suite: str
    name: str
    anchor: str
    run: Callable[[SuiteConfig], CheckReport]


def _tol(cfg, default):
    return default if cfg.tol is None else cfg.tol


def _qseries():
    yield ("qseries:bracket_laws", "[u+r]=-[u], [u+r tau]=-e^{-pi i tau-2 pi i u/r}[u], parity",
           lambda g: qseries.check_bracket_laws(g.context(), max(g.n_samples, 100), g.seed, _tol(g, 1e-10)))
    yield ("qseries:theta_reflection", "Theta_p(z)=(z,p)(p/z;p)(p;p)",
           lambda g: qseries.check_theta_reflection(g.context(), g.n_samples, g.seed, _tol(g, 1e-10)))
    yield ("qseries:cutoff_stability", "(z;t_1,...,t_k) truncation",
           lambda g: qseries.check_cutoff_stability(g.context(), min(g.n_samples, 20), g.seed))


def _structfuncs():
    yield ("structfuncs.rho_mu_chi", "rho+/rho+* = mu chi(1/2-u)/(mu* chi(1/2+u))",
           lambda g: structfuncs.check_rho_mu_chi(g.context(), g.n_samples, g.seed, _tol(g, 1e-10)))
    yield ("structfuncs.rho_trig_limit", "rho+ at p=0 vs -q^2 z^{1/r} rho_VV(z)",
           lambda g: structfuncs.check_rho_trig_limit(g.context(), g.n_samples, g.seed, _tol(g, 1e-10)))


def _rmatrix():
    yield ("rmatrix.rbar_permutation", "Rbar(0,s) = P",
           lambda g: rmatrix.check_rbar_permutation(g.context(), 20, g.seed, _tol(g, 1e-12)))
    yield ("rmatrix.2x2_blocks", "solved 2x2 blocks up to gauge",
           lambda g: rmatrix.check_2x2_blocks(g.context(), g.n_samples, g.seed, _tol(g, 1e-10)))
    yield ("rmatrix.dybe", "dynamical Yang-Baxter equation",
           lambda g: rmatrix.check_dybe(g.context(), None, max(g.n_samples, 100), g.seed, _tol(g, 1e-9)))
    yield ("rmatrix.quasi_periodicity", "entrywise quasi-periodicity multipliers",
           lambda g: rmatrix.check_r_quasi_periodicity(g.context(), 20, g.seed, _tol(g, 1e-10)))


def _bosonope():
    for rid in catalog.list_relations():
        entry = catalog.REGISTRY[rid]
        yield (f"relation:{rid}", entry.anchor,
               lambda g, rid=rid: catalog.verify_relation(rid, g.context(), g.n_samples, g.series_order,
                                                          g.seed, _tol(g, 1e-10)))
    yield ("bosonope:kappa", "K(qz)K(z)^{-1}K(q^{-1}z)",
           lambda g: checks.verify_kappa(g.context(), _tol(g, 1e-10), g.series_order))
    yield ("bosonope:kappa@c=0", "K(qz)K(z)^{-1}K(q^{-1}z) at level zero",
           lambda g: _renamed(checks.verify_kappa(g.context(c=0.0), _tol(g, 1e-10), g.series_order),
                              "bosonope:kappa@c=0"))
    yield ("bosonope:ef_poles", "E-F poles at q^{+-c} z2",
           lambda g: checks.verify_ef_poles(g.context(), _tol(g, 1e-10), g.series_order, 20, g.seed))
    yield ("bosonope:serre", "level-one Serre sums",
           lambda g: checks.verify_serre(g.context(), 8, _tol(g, 1e-10)))


def _evalrep():
    yield ("evalrep:psi_factorization", "psi = :k(z/q) k(z)^{-1} k(qz):",
           lambda g: evalrep.check_psi_factorization(g.context(c=0.0), g.n_samples, g.seed, _tol(g, 1e-10)))
    yield ("evalrep:k_modes", "pi_w(k) against its oscillator sum",
           lambda g: evalrep.check_k_modes(g.context(c=0.0), min(g.n_samples, 20), g.seed, _tol(g, 1e-10)))
    yield ("evalrep:psi_shift", "psi^+(q^{-r}z) = q^{h/2} psi(z,p)",
           lambda g: evalrep.check_psi_shift(g.context(c=0.0), min(g.n_samples, 20), g.seed, _tol(g, 1e-10)))
    for rid in list(evalrep.REP_RELATIONS) + ["K/K"]:
        yield (f"evalrep:exchange:{rid}", "representation-level exchange",
               lambda g, rid=rid: evalrep.check_rep_exchange(rid, g.context(c=0.0), g.n_samples, g.seed,
                                                             _tol(g, 1e-10)))


def _identities():
    yield ("identities:half_current", "two-term bracket identity behind the half-current relation",
           lambda g: identities.check_half_current_identity(g.context(), max(g.n_samples, 100), g.seed,
                                                            _tol(g, 1e-10)))
    yield ("identities:riemann", "[u+x]*[u-x]*[v+y]*_+[v-y]*_+ - (x<->y) = -[x-y]*[x+y]*[u+v]*_+[u-v]*_+",
           lambda g: identities.check_riemann_identity(g.context(), max(g.n_samples, 100), g.seed, _tol(g, 1e-10)))
    yield ("identities:weak_zero", "symmetrized F vanishes weakly",
           lambda g: identities.check_appc_weak_zero(g.context(), max(g.n_samples, 100), g.seed, _tol(g, 1e-9)))
    yield ("identities:g_residues", "Res G(u') = 0 at u1+c/2, u2+c/2, u''+1/2, u''-1",
           lambda g: identities.check_g_residues(g.context(), 10, g.seed, _tol(g, 1e-9)))
    yield ("identities:contour_normalization", "contour normalization constant",
           lambda g: identities.check_contour_normalization(g.context(), _tol(g, 1e-10)))


def _renamed(rep: CheckReport, name: str) -> CheckReport:
    rep.name = name
    return rep


_BUILDERS = {"qseries": _qseries, "structfuncs": _structfuncs, "rmatrix": _rmatrix, "bosonope": _bosonope,
             "evalrep": _evalrep, "identities": _identities}


def registry(suites=None) -> list[RegisteredCheck]:
    out = []
    for suite, build in _BUILDERS.items():
        if suites is not None and suite not in suites:
            continue
        out.extend(RegisteredCheck(suite, name, anchor, fn) for name, anchor, fn in build())
    return out


def _run_one(chk: RegisteredCheck, cfg: SuiteConfig) -> CheckReport:
    try:
        rep = chk.run(cfg)
    except (ArithmeticError, ValueError, FloatingPointError) as exc:
        rep = CheckReport(chk.name, chk.anchor, cfg.to_dict(), 0, math.inf, _tol(cfg, 1e-10), errored=True,
                          notes={"error": f"{type(exc).__name__}: {exc}"})
        rep.passed = False
    if not math.isfinite(rep.max_residual):
        rep.passed = False
    return rep


def run_suites(cfg: SuiteConfig, names=None, progress: Callable[[CheckReport], None] | None = None):
    """Run the selected suites in registry order; `names` narrows to exact check names."""
    reports = []
    for chk in registry(cfg.selected):
        if names and chk.name not in names:
            continue
        rep = _run_one(chk, cfg)
        reports.append(rep)
        if progress:
            progress(rep)
    return reports


def render_json(cfg: SuiteConfig, reports) -> str:
    body = {"config": cfg.to_dict(), "reports": [r.to_dict() for r in reports]}
    return json.dumps(body, indent=2, sort_keys=True)


def render_text(reports) -> str:
    return "".join(r.line() + "\n" for r in reports)


def emit_report(cfg: SuiteConfig, reports, fmt: str = "json", path: str | Path | None = None) -> str:
    text = render_json(cfg, reports) if fmt == "json" else render_text(reports)
    if path is not None:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")
    return text


def load_reports(text: str) -> list[CheckReport]:
    return [CheckReport.from_dict(d) for d in json.loads(text)["reports"]]
