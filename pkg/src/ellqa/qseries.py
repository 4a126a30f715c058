"""q-Pochhammer products, theta functions and the bracket functions."""
from __future__ import annotations

import cmath
from functools import lru_cache
from typing import Sequence

import numpy as np

from .context import BracketKind, EllipticContext
from .series import PowerSeries


@lru_cache(maxsize=256)
def _lattice(bases: tuple, n: int) -> np.ndarray:
    """All products t1^n1...tk^nk with 0 <= ni < n, flattened."""
    grid = np.ones(1, dtype=complex)
    for t in bases:
        grid = (grid[:, None] * (complex(t) ** np.arange(n))[None, :]).ravel()
    return grid


def _check_bases(bases):
    for t in bases:
        if abs(t) >= 1:
            raise ValueError(f"base {t} has modulus >= 1; product diverges")


def qpoch_raw(z, bases: Sequence[complex], cutoff: int):
    """(z; t1..tk)_inf truncated at `cutoff` factors per base; z may be an array."""
    bases = tuple(complex(t) for t in bases)
    _check_bases(bases)
    lat = _lattice(bases, cutoff) if bases else np.ones(1, dtype=complex)
    z = np.asarray(z, dtype=complex)
    vals = np.prod(1.0 - z[..., None] * lat, axis=-1)
    return vals if vals.ndim else complex(vals)


def qpoch_multi(z, bases: Sequence[complex], ctx: EllipticContext):
    return qpoch_raw(z, bases, ctx.cutoff)


def theta_raw(z, p: float, cutoff: int):
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ValueError("theta_p(z) is undefined at z = 0")
    if not (0 < p < 1):
        raise ValueError("need 0 < p < 1")
    val = qpoch_raw(z, (p,), cutoff) * qpoch_raw(p / z, (p,), cutoff) * qpoch_raw(p, (p,), cutoff)
    return val


def theta_p(z, p: float, ctx: EllipticContext | None = None, cutoff: int | None = None):
    """Theta_p(z) = (z;p)(p/z;p)(p;p)."""
    if cutoff is None:
        cutoff = ctx.cutoff if ctx is not None else _cutoff_for(p)
    return theta_raw(z, p, cutoff)


def _cutoff_for(t: float, tol: float = 1e-14) -> int:
    import math

    return min(int(math.ceil(math.log(tol * 1e-2) / math.log(t))) + 4, 512)


def bracket(u, kind: BracketKind, ctx: EllipticContext):
    """[u], [u]_+, [u]* or [u]*_+ with u the additive variable (z = q^{2u})."""
    r, p = ctx.nome(kind.starred)
    lq = ctx.log_q
    u = np.asarray(u, dtype=complex)
    z = np.exp(2 * u * lq)
    if kind.plus:
        z = -z
    val = np.exp((u * u / r - u) * lq) * theta_raw(z, p, ctx.cutoff)
    return val if np.ndim(val) else complex(val)


class Brackets:
    """Shorthand evaluator: b(u), b.plus(u), with a fixed kind family."""

    def __init__(self, ctx: EllipticContext, starred: bool = False):
        self.ctx = ctx
        self.starred = starred
        self._k = BracketKind.STAR if starred else BracketKind.PLAIN
        self._kp = BracketKind.STAR_PLUS if starred else BracketKind.PLUS

    def __call__(self, u):
        return bracket(u, self._k, self.ctx)

    def plus(self, u):
        return bracket(u, self._kp, self.ctx)


def curly(z, ctx: EllipticContext, starred: bool = False):
    """{z} = (z; p, q^6)_inf; the starred variant uses p*."""
    p = ctx.p_star if starred else ctx.p
    return qpoch_multi(z, (p, ctx.q**6), ctx)


def log_series_poch(prefactors, order: int) -> PowerSeries:
    """Taylor series in x of log prod_i (a_i x; bases_i)_inf.

    `prefactors` is a list of (a, bases) or (a, bases, weight); the weight
    multiplies the logarithm (a product raised to an integer power).
    """
    coeffs = np.zeros(order + 1, dtype=complex)
    m = np.arange(1, order + 1)
    for item in prefactors:
        a, bases = item[0], item[1]
        w = item[2] if len(item) > 2 else 1
        if abs(a) >= 1:
            raise ValueError(f"prefactor {a} has modulus >= 1")
        _check_bases(bases)
        den = np.ones(order, dtype=complex)
        for t in bases:
            den = den * (1 - complex(t) ** m)
        coeffs[1:] += -w * complex(a) ** m / (m * den)
    return PowerSeries(coeffs)


def qint(x, q: float):
    """Symmetric q-number [x]_q = (q^x - q^-x)/(q - q^-1)."""
    return (q**x - q ** (-x)) / (q - 1 / q)


def principal_power(z: complex, a: float) -> complex:
    return cmath.exp(a * cmath.log(z))


# ---------------------------------------------------------------------------
# bracket laws


def _rt_mult(u, ctx):
    t = ctx.tau
    return cmath.exp(-1j * cmath.pi * t - 2j * cmath.pi * u / ctx.r)


# name -> (lhs, rhs) as functions of (u, Brackets, ctx)
BRACKET_LAWS = {
    "odd": (lambda u, b, c: b(-u), lambda u, b, c: -b(u)),
    "plus_even": (lambda u, b, c: b.plus(-u), lambda u, b, c: b.plus(u)),
    "shift_r": (lambda u, b, c: b(u + c.r), lambda u, b, c: -b(u)),
    "shift_rtau": (lambda u, b, c: b(u + c.r * c.tau), lambda u, b, c: -_rt_mult(u, c) * b(u)),
    "plus_shift_r": (lambda u, b, c: b.plus(u + c.r), lambda u, b, c: b.plus(u)),
    "plus_shift_rtau": (lambda u, b, c: b.plus(u + c.r * c.tau), lambda u, b, c: _rt_mult(u, c) * b.plus(u)),
    "half_rtau": (lambda u, b, c: b(u + c.r * c.tau / 2),
                  lambda u, b, c: 1j * cmath.exp(-1j * cmath.pi * (u / c.r + c.tau / 4)) * b.plus(u)),
}


def law_residual(name: str, u, ctx: EllipticContext, sign: float = 1.0) -> float:
    """Relative residual of one bracket law; `sign` multiplies the right side."""
    from .report import rel_residual

    lhs, rhs = BRACKET_LAWS[name]
    b = Brackets(ctx)
    return rel_residual(lhs(u, b, ctx), sign * rhs(u, b, ctx))


def check_bracket_laws(ctx: EllipticContext, n_samples: int = 100, seed: int = 0, tol: float = 1e-10,
                       laws=None):
    """Parity and quasi-periodicity laws of [u] and [u]_+ in their reference form.

    The notes keep per-law residuals and, for the plus r tau-shift, the
    residual with the opposite sign of the multiplier.
    """
    from .report import CheckReport, draw_u, rng_for

    names = list(laws or BRACKET_LAWS)
    rng = rng_for(seed, "qseries:bracket_laws")
    us = [draw_u(rng, ctx, re_max=ctx.r) for _ in range(n_samples)]
    per = {n: max(law_residual(n, u, ctx) for u in us) for n in names}
    rep = CheckReport("qseries:bracket_laws", "[u+r]=-[u], [u+r tau]=-e^{-pi i tau-2 pi i u/r}[u], parity",
                      {"q": ctx.q, "r": ctx.r, "c": ctx.c}, n_samples, max(per.values()), tol)
    rep.notes["per_law"] = per
    if "plus_shift_rtau" in names:
        rep.notes["plus_shift_rtau_negated"] = max(law_residual("plus_shift_rtau", u, ctx, -1.0) for u in us)
    return rep


def check_theta_reflection(ctx: EllipticContext, n_samples: int = 50, seed: int = 0, tol: float = 1e-10):
    """Theta_p(p/z) = Theta_p(z) and Theta_p(pz) = -z^{-1} Theta_p(z)."""
    from .report import CheckReport, rel_residual, rng_for

    rng = rng_for(seed, "qseries:theta_reflection")
    p = ctx.p
    worst = 0.0
    for _ in range(n_samples):
        z = complex(*rng.uniform(-1, 1, 2)) + 0.5
        t = theta_p(z, p, ctx)
        worst = max(worst, rel_residual(theta_p(p / z, p, ctx), t), rel_residual(theta_p(p * z, p, ctx), -t / z))
    return CheckReport("qseries:theta_reflection", "Theta_p(z)=(z,p)(p/z;p)(p;p)",
                       {"q": ctx.q, "r": ctx.r, "c": ctx.c}, n_samples, worst, tol)


def check_cutoff_stability(ctx: EllipticContext, n_samples: int = 20, seed: int = 0):
    """Doubling the product cutoff moves bracket values by less than tol/10."""
    from .report import CheckReport, draw_u, rel_residual, rng_for

    rng = rng_for(seed, "qseries:cutoff_stability")
    wide = ctx.with_(product_cutoff=2 * ctx.cutoff)
    worst = 0.0
    for _ in range(n_samples):
        u = draw_u(rng, ctx, re_max=ctx.r)
        for kind in BracketKind:
            worst = max(worst, rel_residual(bracket(u, kind, ctx), bracket(u, kind, wide)))
    return CheckReport("qseries:cutoff_stability", "(z;t_1,...,t_k) truncation",
                       {"q": ctx.q, "r": ctx.r, "c": ctx.c}, n_samples, worst, ctx.tol / 10)
