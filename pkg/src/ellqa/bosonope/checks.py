"""Normal-ordering constants, E-F pole data and the level-one Serre sums."""
from __future__ import annotations

import itertools

import numpy as np

from ..context import EllipticContext
from ..qseries import qpoch_raw
from ..report import CheckReport, PoleError, rel_residual, rng_for
from ..structfuncs import kappa, kappa_prime
from .couplings import ModeCoupling, compose, contraction_value, exchange_factor, inverse, shifted
from .currents import standard_currents
from .modes import commutator_poly
from .zeromodes import normal_form


def _params(ctx, **extra):
    return {"q": ctx.q, "r": ctx.r, "c": ctx.c, **extra}


def _mode_gap(a: ModeCoupling, b: ModeCoupling, ctx, order: int) -> float:
    q = ctx.q
    return max(max(abs(a.ann.value(q, n) - b.ann.value(q, n)), abs(a.cre.value(q, n) - b.cre.value(q, n)))
               for n in range(1, order + 1))


def _word_gap(a: ModeCoupling, b: ModeCoupling, ctx, us=(0.13, 0.41 + 0.2j), scalar=True) -> float:
    """Distance between the normal-ordered zero-mode words of a and b."""
    gap = 0.0
    for u in us:
        na, nb = normal_form(a.zero_word(u, ctx.log_q)), normal_form(b.zero_word(u, ctx.log_q))
        gap = max(gap, float(np.max(np.abs(np.subtract(na.x, nb.x)))),
                  float(np.max(np.abs(np.subtract(na.y, nb.y)))))
        if scalar:
            gap = max(gap, abs(na.scalar / nb.scalar - 1))
    return gap


def triple_constant(parts, ctx) -> complex:
    """c with A B C = c :A B C: for the given ordered couplings."""
    val = 1.0 + 0j
    for i, j in itertools.combinations(range(len(parts)), 2):
        val *= contraction_value(parts[i], parts[j], ctx)
    return val


def kappa_routes(ctx: EllipticContext):
    """(kappa, kappa') from normal ordering, with the currents they must reproduce.

    H(z) = kappa K(qz) K(z)^-1 K(q^-1 z) and
    H(q^r z) = kappa' K(q^{r-1} z) K(q^r z)^-1 K(q^{r+1} z).
    """
    cur = standard_currents(ctx)
    K, H = cur["K"], cur["H"]
    fwd = [shifted(K, 0.5), inverse(K), shifted(K, -0.5)]
    r2 = ctx.r / 2
    rev = [shifted(K, r2 - 0.5), inverse(shifted(K, r2)), shifted(K, r2 + 0.5)]
    return (1 / triple_constant(fwd, ctx), fwd, H), (1 / triple_constant(rev, ctx), rev, shifted(H, r2))


def kappa_closed_form(ctx: EllipticContext, starred_only=False) -> complex:
    """Resummed value of the forward constant, written with {x} = (x; p, q^6).

    kappa = F(p)/F(p*) with
    F(t) = (t q^-2; t)(t q^-1; t)^-1 {t q^2}^3 {t q^3}^3 / ({t}^3 {t q^5}^3).
    """
    q = ctx.q

    def F(t):
        def br(x):
            return qpoch_raw(x, (t, q**6), ctx.cutoff)

        def one(x):
            return qpoch_raw(x, (t,), ctx.cutoff)

        return (one(t / q**2) / one(t / q) * br(t * q**2) ** 3 * br(t * q**3) ** 3
                / (br(t) ** 3 * br(t * q**5) ** 3))

    return complex(F(ctx.p) / F(ctx.p_star))


def verify_kappa(ctx: EllipticContext, tol: float = 1e-10, order: int = 30) -> CheckReport:
    (k1, fwd, H), (k2, rev, Hr) = kappa_routes(ctx)
    structure = max(_mode_gap(compose("fwd", [(p, 0, 1) for p in fwd]), H, ctx, order),
                    _mode_gap(compose("rev", [(p, 0, 1) for p in rev]), Hr, ctx, order),
                    _word_gap(compose("fwd", [(p, 0, 1) for p in fwd]), H, ctx),
                    _word_gap(compose("rev", [(p, 0, 1) for p in rev]), Hr, ctx))
    want1, want2 = kappa(ctx), kappa_prime(ctx)
    e1, e2 = rel_residual(k1, want1), rel_residual(k2, want2)
    notes = {"kappa_computed": k1, "kappa_claimed": want1, "kappa_prime_computed": k2,
             "kappa_prime_claimed": want2, "kappa_closed_form": kappa_closed_form(ctx),
             "mode_structure_residual": structure, "kappa_residual": e1, "kappa_prime_residual": e2}
    return CheckReport("bosonope:kappa", "$K(qz)K(z)^{-1}K(q^{-1}z)$", _params(ctx, order=order),
                       1, max(e1, e2, structure), tol, notes=notes)


# ---------------------------------------------------------------------------
# E-F poles


def _level_one(ctx):
    return ctx if ctx.c == 1.0 else ctx.with_(c=1.0)


def ef_kernel(ctx: EllipticContext):
    """x -> contraction of E(z1) F(z2), x = z2/z1, level one."""
    cur = standard_currents(ctx)
    E, F = cur["E1"], cur["F1"]
    return lambda x: contraction_value(E, F, ctx, x)


def find_ef_poles(ctx: EllipticContext, newton_steps: int = 60):
    """Poles of the E-F kernel in the annulus q^2 < |x| < q^-2, refined by Newton on 1/phi."""
    cur = standard_currents(ctx)
    poly = cur["E1"].ann * cur["F1"].cre * commutator_poly(ctx)
    q = ctx.q
    cands = []
    for w, e, bases in poly.product_terms(q):
        if w.real <= 0:
            continue
        # zeros of (q^e x; bases) with the lattice index 0 in every base
        x0 = q ** (-e)
        if q**2 < abs(x0) < q**-2:
            cands.append(x0)
    phi = ef_kernel(ctx)

    def recip(x):
        try:
            return 1 / phi(x)
        except PoleError:
            return 0j

    poles = []
    for x0 in cands:
        x = x0 * (1 + 1e-3)
        for _ in range(newton_steps):
            h = 1e-7 * abs(x)
            g = recip(x)
            if g == 0:
                break
            step = g / ((recip(x + h) - recip(x - h)) / (2 * h))
            x = x - step
            if abs(step) < 1e-15 * abs(x):
                break
        poles.append(complex(x))
    return sorted(poles, key=abs)


def verify_ef_poles(ctx: EllipticContext, tol: float = 1e-10, order: int = 30, n_samples: int = 20,
                    seed: int = 0) -> CheckReport:
    """Poles of the E-F kernel sit at z1 = q^{+-c} z2 and the residue content is H^{+-}.

    At each pole the normal-ordered product :E(z1)F(z2): must carry the modes
    and zero-mode word of H^+(q^{c/2}z2) = H(q^r z2) resp. H^-(q^{-c/2}z2) =
    H(q^-r z2).  Away from the poles E and F commute (exchange factor 1).
    """
    ctx = _level_one(ctx)
    q, c = ctx.q, ctx.c
    cur = standard_currents(ctx)
    E, F, H = cur["E1"], cur["F1"], cur["H"]
    poles = find_ef_poles(ctx)
    expect = sorted([complex(q**c), complex(q**-c)], key=abs)
    loc = max(abs(a - b) for a, b in zip(poles, expect)) if len(poles) == 2 else float("inf")
    modes = 0.0
    residues = {}
    for sgn in (1, -1):
        prod = compose("EF", [(E, sgn * c / 2, 1), (F, 0, 1)])
        target = shifted(H, sgn * ctx.r / 2)
        modes = max(modes, _mode_gap(prod, target, ctx, order), _word_gap(prod, target, ctx, scalar=False))
        # scalar weight of the delta term: kernel residue times zero-mode reordering
        x0 = q ** (-sgn * c)
        h = 1e-6 * x0
        phi = ef_kernel(ctx)
        res = 0.5 * h * (phi(x0 + h) - phi(x0 - h)) * -1 / x0
        zs = normal_form(prod.zero_word(0.0, ctx.log_q)).scalar / normal_form(target.zero_word(0.0, ctx.log_q)).scalar
        residues["H+" if sgn > 0 else "H-"] = complex(res * zs)
    ef = exchange_factor(E, F, ctx)
    rng = rng_for(seed, "ef_poles")
    commute = 0.0
    for _ in range(n_samples):
        u1, u2 = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-0.3, 0.3, 2)
        try:
            commute = max(commute, abs(ef(u1, u2) - 1))
        except PoleError:
            continue
    notes = {"poles": poles, "expected": expect, "location_residual": loc, "mode_residual": modes,
             "exchange_residual": commute, "delta_weights": residues}
    return CheckReport("bosonope:ef_poles", "$[E(z_1),F(z_2)]=\\frac{1}{q-q^{-1}}(H^+(q^{c/2}z_2)...)$",
                       _params(ctx, order=order), n_samples, max(loc, modes, commute), tol, notes=notes)


# ---------------------------------------------------------------------------
# Serre relations


def _poch(x, t, ctx):
    return qpoch_raw(x, (t,), ctx.cutoff)


def serre_coefficient(kind: str, w, ctx: EllipticContext) -> complex:
    """Scalar coefficient of the ordered product X(w1)X(w2)X(w3); w are z-values."""
    q = ctx.q
    w1, w2, w3 = w
    if kind == "E":
        t = ctx.p_star

        def P(a, x):
            return _poch(t * q**a * x, t, ctx)

        lead = (P(2, w3 / w1) * P(-1, w3 / w1) * P(-1, w3 / w2) * P(-1, w2 / w1)
                / (P(-2, w3 / w1) * P(1, w3 / w1) * P(1, w3 / w2) * P(1, w2 / w1)))
        den = P(-2, w2 / w1) * P(-2, w3 / w2)
        bracket = (w1 * _poch(q**2 * w2 / w1, t, ctx) * P(2, w3 / w2)
                   - q * w2 * P(2, w2 / w1) * P(2, w3 / w2)) / den
        return lead * bracket
    t = ctx.p

    def P(a, x):
        return _poch(t * q**a * x, t, ctx)

    lead = (P(1, w2 / w1) * P(-2, w3 / w1) * P(1, w3 / w2) * P(1, w3 / w2)
            / (P(-1, w2 / w1) * P(2, w3 / w1) * P(-1, w3 / w1) * P(-1, w3 / w2)))
    den = P(2, w2 / w1) * P(2, w3 / w2)
    bracket = (w1 * _poch(q**-2 * w2 / w1, t, ctx) * P(-2, w3 / w2)
               - w2 / q * P(-2, w2 / w1) * _poch(q**-2 * w3 / w2, t, ctx)) / den
    return lead * bracket


def _power_prefactor(kind, us, ctx):
    # z^a written as q^{2ua}: z_{s1}^{-1/2r*} z_{s2}^{-1/r*}, or z_{s1}^{2/r} z_{s2}^{1/r}
    if kind == "E":
        a1, a2 = -1 / (2 * ctx.r_star), -1 / ctx.r_star
    else:
        a1, a2 = 2 / ctx.r, 1 / ctx.r
    return ctx.qpow(2 * (us[0] * a1 + us[1] * a2))


def serre_terms(kind: str, u, ctx: EllipticContext, perms=None) -> list[complex]:
    """Each sigma-term of the symmetrised sum, as a scalar times the common :XXX: word."""
    cur = standard_currents(ctx)
    X = cur["E1" if kind == "E" else "F1"]
    out = []
    for perm in perms or itertools.permutations(range(3)):
        us = [u[i] for i in perm]
        val = 1.0 + 0j
        for i, j in itertools.combinations(range(3), 2):
            val *= contraction_value(X, X, ctx, ctx.qpow(2 * (us[j] - us[i])))
        word = sum((X.zero_word(ui, ctx.log_q) for ui in us), ())
        val *= normal_form(word).scalar
        ws = [ctx.z_of(ui) for ui in us]
        out.append(serre_coefficient(kind, ws, ctx) * _power_prefactor(kind, us, ctx) * val)
    return out


def serre_grid(kind: str, ctx: EllipticContext, order: int = 8, radii=(0.9, 0.9), perms=None):
    """Normalised symmetrised sum on a torus in (z2/z1, z3/z2) and its Laurent coefficients."""
    n = 2 * order + 2
    th = 2 * np.pi * np.arange(n) / n
    lq = ctx.log_q
    base1 = np.log(radii[0]) / (2 * lq)
    base2 = np.log(radii[1]) / (2 * lq)
    u1 = 0.07 + 0.01j
    vals = np.zeros((n, n), dtype=complex)
    scale = 0.0
    for i, a in enumerate(th):
        for j, b in enumerate(th):
            u2 = u1 + base1 + 1j * a / (2 * lq)
            u3 = u2 + base2 + 1j * b / (2 * lq)
            terms = serre_terms(kind, (u1, u2, u3), ctx, perms)
            vals[i, j] = sum(terms)
            scale = max(scale, max(abs(t) for t in terms))
    coeffs = np.fft.fft2(vals / scale) / n**2
    keep = np.r_[0:order + 1, n - order:n]
    return vals / scale, coeffs[np.ix_(keep, keep)]


def verify_serre(ctx: EllipticContext, order: int = 8, tol: float = 1e-10) -> CheckReport:
    """Both level-one Serre sums vanish: every Laurent coefficient through `order`."""
    ctx = _level_one(ctx)
    worst, notes = 0.0, {}
    for kind in ("E", "F"):
        vals, coeffs = serre_grid(kind, ctx, order)
        m = float(max(np.max(np.abs(coeffs)), np.max(np.abs(vals))))
        notes[f"{kind}_residual"] = m
        worst = max(worst, m)
    return CheckReport("bosonope:serre", "level-one Serre sums", _params(ctx, order=order),
                       (2 * order + 2) ** 2, worst, tol, notes=notes)
