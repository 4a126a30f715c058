"""Scalar structure functions and constants of the algebra."""
from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

from .context import EllipticContext
from .qseries import curly, qpoch_multi, theta_p
from .report import POLE_EPS, CheckReport, PoleError, draw_u, rel_residual, rng_for, sample_until


class StructFnId(enum.Enum):
    RHO_PLUS = "rho_plus"
    RHO_PLUS_STAR = "rho_plus_star"
    RHO = "rho"
    KAPPA = "kappa"
    KAPPA_PRIME = "kappa_prime"
    MU = "mu"
    MU_STAR = "mu_star"
    CHI = "chi"
    G_CONST = "g_const"


def _ratio(num, den, what):
    num = np.prod(num)
    den = np.prod(den)
    if abs(den) < POLE_EPS:
        raise PoleError(what, den)
    return num / den


def rho_plus(u, ctx: EllipticContext, starred: bool = False, p_override: float | None = None,
             power: float = 1.0):
    """rho^+(u); `p_override` replaces the nome (0 gives the trigonometric
    limit) and `power` scales the exponent of z^{1/r}."""
    r = ctx.r_star if starred else ctx.r
    p = ctx.p_star if starred else ctx.p
    if p_override is not None:
        p = p_override
    q = ctx.q
    z = ctx.z_of(u)

    def C(x):
        return qpoch_multi(x, (p, q**6), ctx) if p > 0 else qpoch_multi(x, (q**6,), ctx)

    num = [C(p * q**2 * z), C(p * q**3 * z) ** 2, C(p * q**4 * z),
           C(1 / z), C(q / z), C(q**5 / z), C(q**6 / z)]
    den = [C(p * z), C(p * q * z), C(p * q**5 * z), C(p * q**6 * z),
           C(q**2 / z), C(q**3 / z) ** 2, C(q**4 / z)]
    # z^{1/r} taken as q^{2u/r}
    return -q * ctx.qpow(2 * power * u / r) * _ratio(num, den, "rho_plus denominator")


def rho(u, ctx: EllipticContext):
    return rho_plus(u, ctx, True) / _nonzero(rho_plus(u, ctx, False), "rho_plus")


def mu(u, ctx: EllipticContext, starred: bool = False, scale: complex = 1.0):
    r = ctx.r_star if starred else ctx.r
    p = ctx.p_star if starred else ctx.p
    q = ctx.q
    z = ctx.z_of(u)

    def C(x):
        return curly(x, ctx, starred)

    num = [C(p * q**4 * z), C(p * q**3 * z), C(q**3 * z), C(q**2 * z),
           C(p * q / z), C(p / z), C(q**6 / z), C(q**5 / z)]
    den = [C(p * q**4 / z), C(p * q**3 / z), C(q**3 / z), C(q**2 / z),
           C(p * q * z), C(p * z), C(q**6 * z), C(q**5 * z)]
    return scale * ctx.qpow(2 * u * (1 / r - 1)) * _ratio(num, den, "mu denominator")


def chi(u, ctx: EllipticContext):
    q = ctx.q
    z = ctx.z_of(u)
    t = q**6

    def T(x):
        return theta_p(x, t, ctx)

    return -_ratio([T(q * z), T(q * q * z)], [T(q / z), T(q * q / z)], "chi denominator") / z


def kappa(ctx: EllipticContext) -> complex:
    return _kappa(ctx, 0)


def kappa_prime(ctx: EllipticContext) -> complex:
    return _kappa(ctx, 2)


def _kappa(ctx, k):
    # kappa' is kappa with every q-exponent raised by 2, the starred q^2 slot excepted
    q, p, ps = ctx.q, ctx.p, ctx.p_star

    def C(x):
        return curly(x, ctx)

    def S(x):
        return curly(x, ctx, True)

    if k == 0:
        num = [C(p * q**8), C(p * q**5), C(p * q**3), C(p * q**4) ** 2, C(p),
               S(ps * q**7), S(ps * q), S(ps * q**2) ** 2, S(ps * q**6) ** 2]
        den = [C(p * q**7), C(p * q), C(p * q**2) ** 2, C(p * q**6) ** 2,
               S(ps), S(ps * q**8), S(ps * q**5), S(ps * q**3), S(ps * q**4) ** 2]
    else:
        num = [C(p * q**10), C(p * q**7), C(p * q**5), C(p * q**6) ** 2, C(p * q**2),
               S(ps * q**9), S(ps * q**3), S(ps * q**5) ** 2, S(ps * q**8) ** 2]
        den = [C(p * q**9), C(p * q**3), C(p * q**5) ** 2, C(p * q**8) ** 2,
               S(ps * q**2), S(ps * q**10), S(ps * q**7), S(ps * q**5), S(ps * q**6) ** 2]
    return complex(_ratio(num, den, "kappa denominator"))


def g_const(ctx: EllipticContext) -> complex:
    q, p, ps = ctx.q, ctx.p, ctx.p_star
    t = q**6

    def P(x):
        return qpoch_multi(x, (t,), ctx)

    pre = -_ratio([P(p * q**6), P(p * q**5)], [P(p * q**3), P(p * q**2)], "g prefactor")

    def block(pp, starred):
        def C(x):
            return curly(x, ctx, starred)

        return _ratio([C(q**2 * pp), C(q**3 * pp) ** 2, C(q**4 * pp)],
                      [C(pp), C(q * pp), C(q**5 * pp), C(q**6 * pp)], "g block")

    return complex(pre * block(p, False) / block(ps, True))


_CONSTS = {StructFnId.KAPPA: kappa, StructFnId.KAPPA_PRIME: kappa_prime, StructFnId.G_CONST: g_const}


@lru_cache(maxsize=64)
def _const_cached(fid: StructFnId, ctx: EllipticContext) -> complex:
    return _CONSTS[fid](ctx)


def struct_fn(fid: StructFnId | str, u: complex, ctx: EllipticContext) -> complex:
    fid = StructFnId(fid)
    if fid in _CONSTS:
        return _const_cached(fid, ctx)
    if fid is StructFnId.RHO_PLUS:
        return complex(rho_plus(u, ctx))
    if fid is StructFnId.RHO_PLUS_STAR:
        return complex(rho_plus(u, ctx, True))
    if fid is StructFnId.RHO:
        return complex(rho(u, ctx))
    if fid is StructFnId.MU:
        return complex(mu(u, ctx))
    if fid is StructFnId.MU_STAR:
        return complex(mu(u, ctx, True))
    return complex(chi(u, ctx))


def _nonzero(x, what):
    if abs(x) < POLE_EPS:
        raise PoleError(what, x)
    return x


# ---------------------------------------------------------------------------
# checks


def _params(ctx, **extra):
    d = {"q": ctx.q, "r": ctx.r, "c": ctx.c, "cutoff": ctx.cutoff}
    d.update(extra)
    return d


def check_rho_mu_chi(ctx: EllipticContext, n_samples: int = 50, seed: int = 0, tol: float = 1e-10,
                     mu_scale: complex = 1.0) -> CheckReport:
    """rho+/rho+* against mu chi(1/2-u) / (mu* chi(1/2+u)) at random u.

    Also records the residual of the reduced form rho+/rho+* = mu/mu*.
    """
    rng = rng_for(seed, "structfuncs.rho_mu_chi")

    def ev(u):
        lhs = rho_plus(u, ctx) / rho_plus(u, ctx, True)
        m = mu(u, ctx, scale=mu_scale) / mu(u, ctx, True)
        rhs = m * chi(0.5 - u, ctx) / chi(0.5 + u, ctx)
        return lhs, rhs, m

    samples = sample_until(rng, lambda g: draw_u(g, ctx, re_max=1.0, im_scale=0.5), ev, n_samples)
    worst = max(rel_residual(l, r_) for _, (l, r_, _m) in samples)
    reduced = max(rel_residual(l, m) for _, (l, _r, m) in samples)
    return CheckReport("structfuncs.rho_mu_chi", "rho+/rho+* = mu chi(1/2-u)/(mu* chi(1/2+u))",
                       _params(ctx, mu_scale=mu_scale), n_samples, worst, tol,
                       notes={"reduced_identity_residual": reduced})


def check_rho_trig_limit(ctx: EllipticContext, n_samples: int = 50, seed: int = 0,
                         tol: float = 1e-10, power: float = 1.0) -> CheckReport:
    """rho^+ at p = 0 against C(z) rho_VV(z), C(z) = -q^2 z^{1/r}."""
    from .rmatrix import rho_vv

    rng = rng_for(seed, "structfuncs.rho_trig_limit")
    q = ctx.q

    def ev(u):
        z = ctx.z_of(u)
        if abs(z - 1) < 0.05:
            raise PoleError("common zero at z = 1", z - 1)
        ratio = rho_plus(u, ctx, p_override=0.0, power=power) / _nonzero(rho_vv(z, q), "rho_VV")
        return ratio, -q * q * ctx.qpow(2 * u / ctx.r)

    samples = sample_until(rng, lambda g: draw_u(g, ctx, re_max=1.0, im_scale=0.5), ev, n_samples)
    worst = max(rel_residual(a, b) for _, (a, b) in samples)
    return CheckReport("structfuncs.rho_trig_limit", "rho+ at p=0 vs -q^2 z^{1/r} rho_VV(z)",
                       _params(ctx, power=power), n_samples, worst, tol)
