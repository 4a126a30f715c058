"""Theta-function identities behind the half-current relations, checked pointwise.

All brackets here are the starred family: b(x) = [x]*, b.plus(x) = [x]*_+.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .context import EllipticContext
from .qseries import Brackets
from .report import CheckReport, PoleError, rng_for, sample_until

POLE_GUARD = 1e-10


@dataclass(frozen=True)
class ContourSpec:
    center: complex
    radius: float
    n_points: int = 256

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.n_points < 64:
            raise ValueError("n_points must be at least 64")


def _trapezoid(f, spec: ContourSpec, n: int) -> complex:
    theta = 2 * np.pi * np.arange(n) / n
    z = spec.center + spec.radius * np.exp(1j * theta)
    vals = np.array([complex(f(x)) for x in z])
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand sample on the contour")
    return complex(np.mean(vals * (z - spec.center) / z))


def contour_integral(f, spec: ContourSpec, with_error: bool = False):
    """(1/2 pi i) ∮ f(z) dz/z on a circle by the trapezoidal rule.

    `with_error` also returns the change under doubling n_points.
    """
    val = _trapezoid(f, spec, spec.n_points)
    if not with_error:
        return val
    return val, abs(_trapezoid(f, spec, 2 * spec.n_points) - val)


def _safe(b, x):
    v = b(x)
    if np.min(np.abs(v)) < POLE_GUARD:
        raise PoleError("bracket denominator", v)
    return v


def _draw(rng, k: int, width: float = 1.5, im: float = 0.3) -> np.ndarray:
    return rng.uniform(-width, width, k) + 1j * rng.uniform(-im, im, k)


def _params(ctx, **extra):
    return {"q": ctx.q, "r": ctx.r, "c": ctx.c, **extra}


# ---------------------------------------------------------------------------
# identity used for the first half-current relation of the second group


def half_current_sides(u1, u2, up, P, ctx: EllipticContext, flip: bool = False):
    b = Brackets(ctx, True)
    c = ctx.c
    u = u1 - u2
    lhs = -(b(u1 - up + c / 2 + 1) * b.plus(u2 - up - P + (c - 1) / 2)
            / (_safe(b, u1 - up + c / 2) * _safe(b, u2 - up + c / 2) * _safe(b.plus, P + 0.5)))
    t1 = -(b.plus(u2 - up - P + (c + 1) / 2) * b(u + 1)
           / (_safe(b, u2 - up + c / 2) * _safe(b, u) * _safe(b.plus, P - 0.5)))
    t2 = (b.plus(u1 - up - P + (c + 1) / 2) * b.plus(u + P + 0.5) * b(1)
          / (_safe(b, u1 - up + c / 2) * _safe(b, u) * _safe(b.plus, P - 0.5) * _safe(b.plus, P + 0.5)))
    if flip:
        t2 = -t2
    return lhs, (t1, t2)


def check_half_current_identity(ctx: EllipticContext, n_samples: int = 100, seed: int = 0, tol: float = 1e-10,
                       flip: bool = False) -> CheckReport:
    rng = rng_for(seed, "identities:half_current")

    def ev(x):
        lhs, terms = half_current_sides(*x, ctx, flip=flip)
        scale = max(abs(lhs), *map(abs, terms))
        return abs(lhs - sum(terms)) / scale

    res = [v for _, v in sample_until(rng, lambda g: _draw(g, 4), ev, n_samples)]
    return CheckReport("identities:half_current", "two-term bracket identity behind the half-current relation", _params(ctx),
                       n_samples, max(res), tol)


# ---------------------------------------------------------------------------
# Riemann-type identity


def riemann_sides(u, v, x, y, ctx: EllipticContext, plain_rhs: bool = False):
    b = Brackets(ctx, True)
    lhs = (b(u + x) * b(u - x) * b.plus(v + y) * b.plus(v - y)
           - b(u + y) * b(u - y) * b.plus(v + x) * b.plus(v - x))
    rb = Brackets(ctx, False) if plain_rhs else b
    rhs = -rb(x - y) * rb(x + y) * rb.plus(u + v) * rb.plus(u - v)
    scale = max(abs(b(u + x) * b(u - x) * b.plus(v + y) * b.plus(v - y)),
                abs(b(u + y) * b(u - y) * b.plus(v + x) * b.plus(v - x)), abs(rhs))
    return lhs, rhs, scale


def check_riemann_identity(ctx: EllipticContext, n_samples: int = 100, seed: int = 0, tol: float = 1e-10,
                           plain_rhs: bool = False) -> CheckReport:
    rng = rng_for(seed, "identities:riemann")

    def ev(s):
        lhs, rhs, scale = riemann_sides(*s, ctx, plain_rhs=plain_rhs)
        return abs(lhs - rhs) / scale

    res = [v for _, v in sample_until(rng, lambda g: _draw(g, 4), ev, n_samples)]
    return CheckReport("identities:riemann", "[u+x]*[u-x]*[v+y]*_+[v-y]*_+ - (x<->y) = -[x-y]*[x+y]*[u+v]*_+[u-v]*_+", _params(ctx),
                       n_samples, max(res), tol)


# ---------------------------------------------------------------------------
# weak equality for the two-integral half current


def h_weight(v, ctx: EllipticContext):
    b = Brackets(ctx, True)
    return -b(v + 1) * b(v - 0.5) / (_safe(b, v - 1) * _safe(b, v + 0.5))


def f_terms(u1, u2, up, upp, P, ctx: EllipticContext, drop=(), one_power: int = 3):
    """The four coefficient terms of F(u1, u2, u', u'', L).

    The second term carries [1]*^3, the power its residue at u' = u2 + c/2
    requires; `one_power=1` gives the single-[1]* variant.
    """
    b = Brackets(ctx, True)
    c = ctx.c
    u = u1 - u2
    one = b(1)
    t = [
        b(u2 - up - 2 * P + 2 + c / 2) * b.plus(up - upp - P) * b(1 + u) * b(u + 1.5) * one**2
        / (_safe(b, u2 - up + c / 2) * _safe(b, up - upp - 0.5) * _safe(b, u) * _safe(b, 2 * P - 2)
           * _safe(b.plus, P - 0.5) * _safe(b, u + 0.5)),
        b.plus(u2 - up - P + (c + 1) / 2) * b(u1 - up + 1 + c / 2) * b.plus(u1 - upp - P + (c + 1) / 2)
        * b.plus(u + P + 1) * one**one_power
        / (_safe(b, u2 - up + c / 2) * _safe(b, u1 - up + c / 2) * _safe(b, u1 - upp + c / 2)
           * _safe(b.plus, P - 0.5) ** 2 * _safe(b.plus, P + 0.5) * _safe(b, u + 0.5)),
        -b(u1 - up - 2 * P + 2 + c / 2) * b.plus(up - upp - P) * one**2
        / (_safe(b, u1 - up + c / 2) * _safe(b, up - upp - 0.5) * _safe(b.plus, P - 0.5) * _safe(b, u + 0.5))
        * (b(u + 2 * P - 1) * one * b(u + 1.5) / (_safe(b, u) * _safe(b, 2 * P - 1) * _safe(b, 2 * P - 2))
           + b.plus(P) * b(u + 2 * P + 0.5) * one / (_safe(b, 2 * P) * _safe(b, 2 * P - 1) * _safe(b.plus, P - 1))),
        -b(u2 - up - 2 * P + c / 2) * b.plus(up - upp - P - 1) * b(u1 - up + 1 + c / 2)
        * b(u1 - upp + 1 + c / 2) * one**2
        / (_safe(b, u2 - up + c / 2) * _safe(b, up - upp - 0.5) * _safe(b, u1 - up + c / 2)
           * _safe(b, u1 - upp + c / 2) * _safe(b.plus, P + 0.5) * _safe(b, 2 * P)),
    ]
    return [x for i, x in enumerate(t) if i not in drop]


def symmetrized_terms(u1, u2, up, upp, P, ctx, drop=(), one_power=3):
    """Terms of F(u') = F(.., u', u'') + h(u'' - u') F(.., u'', u')."""
    h = h_weight(upp - up, ctx)
    return (f_terms(u1, u2, up, upp, P, ctx, drop, one_power)
            + [h * x for x in f_terms(u1, u2, upp, up, P, ctx, drop, one_power)])


def symmetrized_f(u1, u2, up, upp, P, ctx, drop=(), one_power=3):
    return sum(symmetrized_terms(u1, u2, up, upp, P, ctx, drop, one_power))


def check_appc_weak_zero(ctx: EllipticContext, n_samples: int = 100, seed: int = 0, tol: float = 1e-9,
                         drop=(), one_power: int = 3) -> CheckReport:
    rng = rng_for(seed, "identities:weak_zero")

    def ev(s):
        terms = symmetrized_terms(*s, ctx, drop=drop, one_power=one_power)
        return abs(sum(terms)) / max(map(abs, terms))

    res = [v for _, v in sample_until(rng, lambda g: _draw(g, 5), ev, n_samples)]
    rep = CheckReport("identities:weak_zero", "symmetrized F vanishes weakly", _params(ctx), n_samples, max(res), tol)
    rep.notes["quasi_periodicity_residual"] = quasi_periodicity_residual(ctx, seed=seed, drop=drop,
                                                                    one_power=one_power)
    return rep


def quasi_periodicity_residual(ctx, n_samples: int = 10, seed: int = 0, drop=(), one_power=3) -> float:
    """Worst mismatch of F(u' + tau* r*) = -exp(-2 pi i (P - 3/2)/r) F(u'), normalized by term size."""
    rng = rng_for(seed, "identities:quasi_periodicity")
    shift = ctx.tau_star * ctx.r_star

    def ev(s):
        u1, u2, up, upp, P = s
        ta = symmetrized_terms(u1, u2, up + shift, upp, P, ctx, drop, one_power)
        tb = symmetrized_terms(u1, u2, up, upp, P, ctx, drop, one_power)
        m = -cmath.exp(-2j * cmath.pi * (P - 1.5) / ctx.r)
        scale = max(max(map(abs, ta)), abs(m) * max(map(abs, tb)))
        return abs(sum(ta) - m * sum(tb)) / scale

    return max(v for _, v in sample_until(rng, lambda g: _draw(g, 5), ev, n_samples))


# ---------------------------------------------------------------------------
# residues of G(u') = F(u') [u'-u''-P+3/2]* / [u'-u'']*


def g_terms(u1, u2, up, upp, P, ctx, one_power=3):
    """Terms of G(u'); `up` may be an array."""
    b = Brackets(ctx, True)
    w = b(up - upp - P + 1.5) / _safe(b, up - upp)
    return [w * t for t in symmetrized_terms(u1, u2, up, upp, P, ctx, one_power=one_power)]


def g_function(u1, u2, up, upp, P, ctx, one_power=3):
    return sum(g_terms(u1, u2, up, upp, P, ctx, one_power))


def residue_at(terms, u0: complex, ctx: EllipticContext, radius: float = 0.02, n_points: int = 256):
    """Residue of sum(terms(u)) dz/(2 pi i z) at u = u0, with a cancellation scale.

    `terms` maps an array of u to a list of arrays.  The circle
    |z - z0| = radius |z0| is pulled back to u near u0.  The scale is the
    largest residue of a single term, or the term size on the contour when no
    single term has a pole there.  Returns (residue, scale, doubling change).
    """
    z0 = ctx.qpow(2 * u0)
    spec = ContourSpec(z0, radius * abs(z0), n_points)

    def integrals(n):
        theta = 2 * np.pi * np.arange(n) / n
        z = z0 + spec.radius * np.exp(1j * theta)
        parts = terms(u0 + np.log(z / z0) / (2 * ctx.log_q))
        weight = (z - z0) / z
        per = [np.mean(np.asarray(t) * weight) for t in parts]
        size = max(np.mean(np.abs(t)) for t in parts) * radius
        return sum(per), max(map(abs, per)), size

    val, top, size = integrals(n_points)
    val2, _, _ = integrals(2 * n_points)
    scale = top if top > 1e-6 * size else size
    return val, scale, abs(val2 - val)


def g_pole_candidates(u1, u2, upp, ctx):
    c = ctx.c
    return {"u1+c/2": u1 + c / 2, "u2+c/2": u2 + c / 2, "u''+1/2": upp + 0.5, "u''-1": upp - 1}


def check_g_residues(ctx: EllipticContext, n_samples: int = 10, seed: int = 0, tol: float = 1e-9,
                     radius: float = 0.02, one_power: int = 3) -> CheckReport:
    """Every first-order pole candidate of G has vanishing residue."""
    rng = rng_for(seed, "identities:g_residues")
    per_pole: dict[str, float] = {}
    quad_err = 0.0

    def draw(g):
        while True:
            u1, u2, upp, P = _draw(g, 4)
            pts = list(g_pole_candidates(u1, u2, upp, ctx).values())
            gaps = [abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]]
            if min(gaps) > 8 * radius:
                return u1, u2, upp, P

    def ev(s):
        nonlocal quad_err
        u1, u2, upp, P = s
        worst = 0.0
        for name, u0 in g_pole_candidates(u1, u2, upp, ctx).items():
            val, scale, err = residue_at(lambda x: g_terms(u1, u2, x, upp, P, ctx, one_power), u0, ctx, radius)
            ratio = abs(val) / scale
            per_pole[name] = float(max(per_pole.get(name, 0.0), ratio))
            quad_err = float(max(quad_err, err / scale))
            worst = max(worst, ratio)
        return worst

    res = [v for _, v in sample_until(rng, draw, ev, n_samples)]
    rep = CheckReport("identities:g_residues", "Res G(u') = 0 at u1+c/2, u2+c/2, u''+1/2, u''-1",
                      _params(ctx), n_samples, max(res), tol)
    rep.notes["per_pole"] = per_pole
    rep.notes["quadrature_doubling_change"] = quad_err
    return rep


def calibration_residue(ctx: EllipticContext, u0: complex = 0.3 + 0.1j, radius: float = 0.02) -> float:
    """Normalized residue of 1/[u'-u0]* at u0; a real pole gives O(1)."""
    b = Brackets(ctx, True)
    val, scale, _ = residue_at(lambda x: [1 / b(x - u0)], u0, ctx, radius)
    return abs(val) / scale


# ---------------------------------------------------------------------------
# contour normalization


def contour_normalization(ctx: EllipticContext, radius: float = 0.05, n_points: int = 256) -> complex:
    """(1/2 pi i) ∮ dz/z 1/[-u] on a small circle about z = 1."""
    b = Brackets(ctx)
    spec = ContourSpec(1.0, radius, n_points)
    return contour_integral(lambda z: 1 / b(-cmath.log(z) / (2 * ctx.log_q)), spec)


def normalization_oracle(ctx: EllipticContext, h: float = 1e-5) -> complex:
    """-1 / ([u]'(0) du/dz) at z = 1 by central differences."""
    b = Brackets(ctx)
    d = (b(h) - b(-h)) / (2 * h)
    return -1 / (d / (2 * ctx.log_q))


def check_contour_normalization(ctx: EllipticContext, tol: float = 1e-10) -> CheckReport:
    """Quadrature of the unit-normalized contour against 1/(p;p)^3.

    The normalization integral equals 1 only after dividing by this constant,
    which the report records.
    """
    from .qseries import qpoch_raw

    b = Brackets(ctx)
    val, err = contour_integral(lambda z: 1 / b(-cmath.log(z) / (2 * ctx.log_q)),
                                ContourSpec(1.0, 0.05, 256), with_error=True)
    closed = 1 / qpoch_raw(ctx.p, (ctx.p,), ctx.cutoff) ** 3
    rep = CheckReport("identities:contour_normalization",
                      "contour normalization constant",
                      _params(ctx), 1, abs(val - closed) / abs(closed), tol)
    rep.notes.update(value=complex(val), closed_form=complex(closed),
                     finite_difference=complex(normalization_oracle(ctx)), doubling_change=float(err))
    return rep
