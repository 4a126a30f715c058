"""Acceptance criteria, each at its stated tolerance.

Every test prints one PASS/FAIL line.  Criteria that do not hold for the
reference formulas are marked xfail(strict=True): they run unmodified and
must keep failing; a fix that makes one pass turns the suite red.
"""
import itertools
import time

import pytest

from ellqa import evalrep, identities, qseries, rmatrix, structfuncs
from ellqa.bosonope import catalog, checks
from ellqa.cli import main
from ellqa.context import EllipticContext

CTX = EllipticContext(q=0.5, r=4.0, c=1.0)
CTX0 = EllipticContext(q=0.5, r=4.0, c=0.0)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {n:2d} {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


@pytest.mark.xfail(strict=True, reason="plus r-tau law holds only with the opposite sign")
def test_01_bracket_quasi_periodicity(verdict):
    t0 = time.perf_counter()
    worst = {}
    for q, r in itertools.product((0.3, 0.5, 0.7), (3.1, 4.0, 5.7)):
        rep = qseries.check_bracket_laws(EllipticContext(q, r), 100, 0, 1e-10)
        worst[(q, r)] = rep.max_residual
    dt = time.perf_counter() - t0
    m = max(worst.values())
    verdict(1, m < 1e-10 and dt < 5, f"max residual {m:.3e} over 9 (q, r), {dt:.2f}s")


def test_02_permutation_and_zeros(verdict):
    t0 = time.perf_counter()
    rep = rmatrix.check_rbar_permutation(CTX, 20, 0, 1e-12)
    dt = time.perf_counter() - t0
    ok = rep.passed and rep.notes["structural_zeros_exact"] and dt < 1
    verdict(2, ok, f"max |Rbar(0,s) - P| {rep.max_residual:.3e}, zeros exact, {dt:.2f}s")


def test_03_dybe(verdict):
    t0 = time.perf_counter()
    rep = rmatrix.check_dybe(CTX, None, 100, 0, 1e-9)
    dt = time.perf_counter() - t0
    ok = rep.passed and rep.notes["n_passing"] == 1 and rep.n_samples >= 100 and dt < 60
    verdict(3, ok, f"sigma={rep.notes['sigma']} residual {rep.max_residual:.3e}, "
                   f"{rep.notes['n_passing']} of {len(rmatrix.SHIFT_CANDIDATES)} pass, {dt:.1f}s")


def test_04_solved_blocks(verdict):
    rep = rmatrix.check_2x2_blocks(CTX, 50, 0, 1e-10)
    verdict(4, rep.passed, f"max block residual {rep.max_residual:.3e} at 50 samples")


@pytest.mark.xfail(strict=True, reason="compatibility identity fails; reduced form holds")
def test_05_rho_mu_chi(verdict):
    rep = structfuncs.check_rho_mu_chi(CTX, 50, 0, 1e-10)
    verdict(5, rep.passed, f"residual {rep.max_residual:.3e} "
                           f"(reduced form {rep.notes['reduced_identity_residual']:.1e})")


@pytest.mark.xfail(strict=True, reason="highest-component Psi*-Psi* scalar disagrees")
def test_06_catalog(verdict):
    t0 = time.perf_counter()
    bad, series = [], 0.0
    for rid in catalog.list_relations():
        rep = catalog.verify_relation(rid, CTX, 50, 30, 0, 1e-10)
        if "series_residual" in rep.notes:
            series = max(series, rep.notes["series_residual"])
        if not rep.passed:
            bad.append(f"{rid}={rep.max_residual:.2e}")
    dt = time.perf_counter() - t0
    ok = not bad and series < 1e-12 and dt < 120
    verdict(6, ok, f"{len(catalog.list_relations())} relations, series max {series:.1e}, "
                   f"failing {bad or 'none'}, {dt:.1f}s")


@pytest.mark.xfail(strict=True, reason="normal-ordering constants differ from the closed-form products")
def test_07_kappa(verdict):
    rep = checks.verify_kappa(CTX, 1e-10)
    zero = checks.verify_kappa(CTX0, 1e-10)
    n = zero.notes
    exact = n["kappa_computed"] == 1 and n["kappa_prime_computed"] == 1 and n["kappa_claimed"] == 1
    verdict(7, rep.passed and exact, f"kappa {rep.notes['kappa_residual']:.2e}, "
                                     f"kappa' {rep.notes['kappa_prime_residual']:.2e}, c=0 exact {exact}")


def test_08_ef_poles(verdict):
    rep = checks.verify_ef_poles(CTX, 1e-10)
    ok = rep.passed and rep.notes["location_residual"] < 1e-10 and rep.notes["mode_residual"] < 1e-10
    verdict(8, ok, f"poles {rep.notes['poles']}, modes {rep.notes['mode_residual']:.1e}")


@pytest.mark.xfail(strict=True, reason="symmetrized level-one sums do not vanish")
def test_09_serre(verdict):
    t0 = time.perf_counter()
    rep = checks.verify_serre(CTX, 8, 1e-10)
    dt = time.perf_counter() - t0
    verdict(9, rep.passed and dt < 60, f"E {rep.notes['E_residual']:.2e}, F {rep.notes['F_residual']:.2e}, "
                                       f"{dt:.1f}s")


@pytest.mark.xfail(strict=True, reason="pi_w(k) carries an extra z^{1/r} prefactor")
def test_10_evaluation_rep(verdict):
    reps = [evalrep.check_psi_factorization(CTX0, 50, 0, 1e-10)]
    reps += [evalrep.check_rep_exchange(rid, CTX0, 50, 0, 1e-10) for rid in list(evalrep.REP_RELATIONS) + ["K/K"]]
    bad = [f"{r.name}={r.max_residual:.2e}" for r in reps if not r.passed]
    verdict(10, not bad, f"{len(reps)} checks, failing {bad or 'none'}")


def test_11_identities(verdict):
    reps = [identities.check_half_current_identity(CTX, 100, 0, 1e-9),
            identities.check_riemann_identity(CTX, 100, 0, 1e-9),
            identities.check_appc_weak_zero(CTX, 100, 0, 1e-9),
            identities.check_g_residues(CTX, 10, 0, 1e-9)]
    worst = max(r.max_residual for r in reps)
    verdict(11, all(r.passed for r in reps), f"worst normalized residual {worst:.2e}")


def test_12_determinism(verdict, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    t0 = time.perf_counter()
    main(["run", "--suite", "all", "--format", "json", "--quiet", "--out", str(a)])
    dt = time.perf_counter() - t0
    main(["run", "--suite", "all", "--format", "json", "--quiet", "--out", str(b)])
    same = a.read_bytes() == b.read_bytes()
    verdict(12, same and dt < 300, f"byte-identical {same}, full run {dt:.1f}s")
