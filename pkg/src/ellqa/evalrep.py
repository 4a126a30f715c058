"""The three-dimensional evaluation module at level zero.

Basis order (+, 0, -).  z and w enter through u-variables, z = q^{2u}, so
that fractional powers in rho^+ stay on a fixed branch; w defaults to 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .context import EllipticContext
from .qseries import qpoch_raw, theta_p
from .report import CheckReport, PoleError, rel_residual, rng_for, sample_until
from .structfuncs import rho, rho_plus

LABELS = ("+", "0", "-")


def unit(i: str, j: str) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[LABELS.index(i), LABELS.index(j)] = 1
    return m


E_PP, E_00, E_MM = unit("+", "+"), unit("0", "0"), unit("-", "-")
E_P0, E_0M, E_M0, E_0P = unit("+", "0"), unit("0", "-"), unit("-", "0"), unit("0", "+")


@dataclass
class DeltaSupportedCurrent:
    """sum_k matrix_k * delta(support_k / z) + smooth.

    `terms` holds (support u-value, matrix); the support point is z = q^{2 s}.
    """

    name: str
    terms: list = field(default_factory=list)
    smooth: np.ndarray | None = None

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.smooth)


def _level_zero(ctx: EllipticContext) -> EllipticContext:
    if ctx.c != 0:
        raise ValueError("the evaluation module has level c = 0")
    return ctx


def _poch(x, ctx):
    return qpoch_raw(x, (ctx.p,), ctx.cutoff)


def _ratio(num, den, ctx):
    n = np.prod([_poch(x, ctx) for x in num])
    d = np.prod([_poch(x, ctx) for x in den])
    if abs(d) < 1e-14:
        raise PoleError("evaluation matrix denominator", d)
    return n / d


def _th(x, ctx):
    return theta_p(x, ctx.p, ctx)


def _diag(a, b, c):
    return np.diag([a, b, c]).astype(complex)


def rep_current(name: str, u: complex, ctx: EllipticContext, uw: complex = 0.0,
                rho_fn: Callable | None = None) -> DeltaSupportedCurrent:
    """pi_w of a current at z = q^{2u}, w = q^{2 uw}."""
    ctx = _level_zero(ctx)
    q, p = ctx.q, ctx.p
    zw = ctx.qpow(2 * (u - uw))
    wz = 1 / zw
    s_plus, s_zero = uw - 0.5, uw  # supports z = w/q and z = w

    def up(x):  # u^+ at z/w = x
        return _diag(_ratio([p * q**3 * x], [p * q * x], ctx),
                     _ratio([p * q**2 * x, p / q * x], [p * q * x, p * x], ctx),
                     _ratio([p / q**2 * x], [p * x], ctx))

    def um(y):  # u^- at w/z = y
        return _diag(_ratio([p / q**3 * y], [p / q * y], ctx),
                     _ratio([p * q * y, p / q**2 * y], [p * y, p / q * y], ctx),
                     _ratio([p * q**2 * y], [p * y], ctx))

    if name == "u_plus":
        return DeltaSupportedCurrent(name, smooth=up(zw))
    if name == "u_minus":
        return DeltaSupportedCurrent(name, smooth=um(wz))
    if name == "x_plus":
        return DeltaSupportedCurrent(name, [(s_plus, E_P0), (s_zero, E_0M)])
    if name == "x_minus":
        return DeltaSupportedCurrent(name, [(s_zero, E_M0), (s_plus, E_0P)])
    if name == "e":
        a = _ratio([p * q**3 / q], [p * q / q], ctx)  # z/w = 1/q on the first support
        b = _ratio([p * q**2, p / q], [p * q, p], ctx)
        return DeltaSupportedCurrent(name, [(s_plus, a * E_P0), (s_zero, b * E_0M)])
    if name == "f":
        a = _ratio([p * q, p / q**2], [p, p / q], ctx)
        b = _ratio([p / q**3 * q], [p / q * q], ctx)  # w/z = q on the second support
        return DeltaSupportedCurrent(name, [(s_zero, a * E_M0), (s_plus, b * E_0P)])
    if name == "k":
        rp = rho_fn or (lambda v: rho_plus(v, ctx))
        pref = rp(u - uw + (2 - ctx.r) / 2)
        t0, t2 = _th(q**ctx.r * zw, ctx), _th(q ** (ctx.r + 2) * zw, ctx)
        t1, t3 = _th(q ** (ctx.r - 1) * zw, ctx), _th(q ** (ctx.r + 1) * zw, ctx)
        if min(abs(t2), abs(t3)) < 1e-14:
            raise PoleError("pi_w(k) theta denominator")
        return DeltaSupportedCurrent(name, smooth=pref * _diag(1, t0 / t2, t0 * t1 / (t2 * t3)))
    if name == "psi":
        th = {a: _th(q ** (ctx.r + a) * zw, ctx) for a in (-2, -1, 0, 1, 2, 3)}
        if min(abs(th[0]), abs(th[1])) < 1e-14:
            raise PoleError("pi_w(psi) theta denominator")
        return DeltaSupportedCurrent(name, smooth=_diag(th[3] / th[1], th[2] * th[-1] / (th[1] * th[0]),
                                                        th[-2] / th[0]))
    raise KeyError(f"unknown current {name!r}")


# ---------------------------------------------------------------------------
# mode-level oracle


def a_mode_diag(m: int, ctx: EllipticContext, uw: complex = 0.0) -> np.ndarray:
    """Diagonal of pi_w(a_m)."""
    q = ctx.q
    qm = q**m
    pref = (qm - 1 / qm) / (q - 1 / q) / m * ctx.qpow(2 * uw * m) * q ** (-m)
    return pref * np.array([1 / qm, 1 - qm, -(qm**2)])


def mode_sum_diag(coef: Callable, u: complex, ctx: EllipticContext, modes, uw: complex = 0.0) -> np.ndarray:
    """Diagonal of exp(sum_m coef(m) pi_w(a_m) z^-m) over the given modes."""
    acc = np.zeros(3, dtype=complex)
    for m in modes:
        acc += coef(m) * a_mode_diag(m, ctx, uw) * ctx.qpow(-2 * u * m)
    return np.exp(acc)


def _qi(x, q):
    return (q**x - q ** (-x)) / (q - 1 / q)


def k_from_modes(u, ctx, n_modes=120):
    """pi_w(k) from its oscillator formula (alpha_m = a_m at level zero)."""
    q, r = ctx.q, ctx.r
    ms = [m for m in range(-n_modes, n_modes + 1) if m]
    return mode_sum_diag(lambda m: -_qi(m, q) / (_qi(r * m, q) * (_qi(2 * m, q) - _qi(m, q))), u, ctx, ms)


def rho_plus_products(u, ctx):
    """rho^+(u) without its -q z^{1/r} prefactor; the oscillator k carries this scalar."""
    return rho_plus(u, ctx, power=0.0) / (-ctx.q)


# ---------------------------------------------------------------------------
# checks


def _params(ctx, **extra):
    return {"q": ctx.q, "r": ctx.r, "c": ctx.c, **extra}


def _draw(rng, ctx, width=0.4):
    return complex(rng.uniform(-width, width), rng.uniform(-0.25, 0.25))


def _factorization_residual(ctx, n_samples, seed, rho_fn):
    def ev(u):
        k = [rep_current("k", u + d, ctx, rho_fn=rho_fn).diagonal for d in (-0.5, 0.0, 0.5)]
        lhs = k[0] * k[2] / k[1]
        rhs = rep_current("psi", u, ctx).diagonal
        return max(rel_residual(a, b) for a, b in zip(lhs, rhs))

    rng = rng_for(seed, "evalrep:psi_factorization")
    return max(v for _, v in sample_until(rng, lambda g: _draw(g, ctx), ev, n_samples))


def check_psi_factorization(ctx: EllipticContext, n_samples: int = 50, seed: int = 0, tol: float = 1e-10,
                            rho_fn: Callable | None = None) -> CheckReport:
    """pi(k(z/q)) pi(k(z))^-1 pi(k(qz)) = pi(psi(z,p)), entrywise.

    pi(k) carries the full rho^+ prefactor; the notes also carry the residual
    when rho^+ is replaced by its product part.
    """
    ctx = _level_zero(ctx)
    rep = CheckReport("evalrep:psi_factorization", "$\\psi(z,p)=:k(q^{-1}z,p)k(z,p)^{-1}k(qz,p):$",
                      _params(ctx), n_samples, _factorization_residual(ctx, n_samples, seed, rho_fn), tol)
    if rho_fn is None:
        rep.notes["residual_without_rho_prefactor"] = _factorization_residual(
            ctx, n_samples, seed, lambda v: rho_plus_products(v, ctx))
    return rep


def check_k_modes(ctx: EllipticContext, n_samples: int = 20, seed: int = 0, tol: float = 1e-10) -> CheckReport:
    """Diagonal shape of pi_w(k) against the oscillator formula.

    Entries are compared after dividing by the E_{++} entry; the notes record
    the worst mismatch of the scalar prefactor itself.
    """
    ctx = _level_zero(ctx)
    rng = rng_for(seed, "evalrep:k_modes")
    scalar = []

    def ev(u):
        a = rep_current("k", u, ctx).diagonal
        b = k_from_modes(u, ctx)
        scalar.append(rel_residual(a[0], b[0]))
        return max(rel_residual(x / a[0], y / b[0]) for x, y in zip(a, b))

    res = [v for _, v in sample_until(rng, lambda g: _draw(g, ctx, 0.2), ev, n_samples)]
    rep = CheckReport("evalrep:k_modes", "$\\pi_w(k(z,p))&=&\\rho^+(q^{-r+2}z/w)$", _params(ctx),
                      n_samples, max(res), tol)
    rep.notes["prefactor_residual"] = max(scalar)
    return rep


def check_psi_shift(ctx: EllipticContext, n_samples: int = 20, seed: int = 0, tol: float = 1e-10,
                    n_modes: int = 150) -> CheckReport:
    """psi^+(q^{-r} z) = q^{h/2} psi(z,p) with psi^+ = u^+ psi_Drinfeld u^- at level zero."""
    ctx = _level_zero(ctx)
    q, r = ctx.q, ctx.r
    rng = rng_for(seed, "evalrep:psi_shift")
    qh2 = np.array([q, 1, 1 / q])

    def ev(u):
        v = u - r / 2  # q^{-r} z
        up = rep_current("u_plus", v, ctx).diagonal
        um = rep_current("u_minus", v, ctx).diagonal
        drin = qh2 * mode_sum_diag(lambda m: q - 1 / q, v, ctx, range(1, n_modes + 1))
        lhs = up * drin * um
        rhs = qh2 * rep_current("psi", u, ctx).diagonal
        return max(rel_residual(a, b) for a, b in zip(lhs, rhs))

    res = [v for _, v in sample_until(rng, lambda g: _draw(g, ctx, 0.3), ev, n_samples)]
    return CheckReport("evalrep:psi_shift", "$\\psi^\\pm(q^{\\mp(r-c/2)}z)=q^{\\pm h/2}\\psi(z,p)$",
                       _params(ctx), n_samples, max(res), tol)


# smooth current, delta current, catalog relation id
REP_RELATIONS = {
    "u_plus/x_plus": ("u_plus", "x_plus", "series:u+x+"),
    "u_plus/x_minus": ("u_plus", "x_minus", "series:u+x-"),
    "u_minus/x_plus": ("u_minus", "x_plus", "series:u-x+"),
    "u_minus/x_minus": ("u_minus", "x_minus", "series:u-x-"),
    "psi/x_plus": ("psi", "x_plus", "series:psi-x+"),
    "psi/x_minus": ("psi", "x_minus", "series:psi-x-"),
    "k/x_plus": ("k", "x_plus", "series:k-x+"),
    "k/x_minus": ("k", "x_minus", "series:k-x-"),
    "k/e": ("k", "e", "basic:k-e"),
    "k/f": ("k", "f", "basic:k-f"),
    "psi/e": ("psi", "e", "dressed:psi-e"),
    "psi/f": ("psi", "f", "dressed:psi-f"),
}


def _unit_ends(mat):
    i, j = np.argwhere(np.abs(mat) > 0)[0]
    return i, j


def check_rep_exchange(relation_id: str, ctx: EllipticContext, n_samples: int = 50, seed: int = 0,
                       tol: float = 1e-10) -> CheckReport:
    """S(z1) X(z2) = phi X(z2) S(z1) at each support of X.

    With S diagonal and X = E_ij there, the identity reads d_i(z1) = phi d_j(z1).
    """
    from .bosonope.catalog import REGISTRY, claimed_factor

    ctx = _level_zero(ctx)
    if relation_id == "K/K":
        return _check_kk_level_zero(ctx, n_samples, seed, tol)
    if relation_id not in REP_RELATIONS:
        raise KeyError(f"unsupported relation {relation_id!r}")
    smooth, delta, cat_id = REP_RELATIONS[relation_id]
    entry = REGISTRY[cat_id]
    rng = rng_for(seed, "evalrep:" + relation_id)
    supports = rep_current(delta, 0.0, ctx).terms

    def ev(u1):
        worst = 0.0
        for s, mat in supports:
            d = rep_current(smooth, u1, ctx).diagonal
            i, j = _unit_ends(mat)
            phi = claimed_factor(entry, u1, s, ctx)
            worst = max(worst, rel_residual(d[i], phi * d[j]))
        return worst

    res = [v for _, v in sample_until(rng, lambda g: _draw(g, ctx), ev, n_samples)]
    return CheckReport(f"evalrep:exchange:{relation_id}", entry.anchor, _params(ctx), n_samples, max(res), tol)


def _check_kk_level_zero(ctx, n_samples, seed, tol):
    rng = rng_for(seed, "evalrep:K/K")
    res = [v for _, v in sample_until(rng, lambda g: _draw(g, ctx), lambda u: abs(rho(u, ctx) - 1), n_samples)]
    return CheckReport("evalrep:exchange:K/K", "K(z_1)K(z_2)=\\rho(z_1/z_2)K(z_2)K(z_1)", _params(ctx),
                       n_samples, max(res), tol)
