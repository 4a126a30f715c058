"""Registry of exchange relations: the two currents and the claimed factor.

Convention throughout: L(z1) R(z2) = phi(u1, u2) R(z2) L(z1), z_i = q^{2 u_i},
u = u1 - u2 and z = z1/z2.  Relations stated the other way round are
rewritten into this form.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..context import EllipticContext
from ..qseries import Brackets, log_series_poch, qpoch_raw, theta_p
from ..report import CheckReport, PoleError, draw_u, rel_residual, rng_for, sample_until, u_box
from ..structfuncs import chi, mu, rho
from .couplings import exchange_factor
from .currents import standard_currents

# a one-sided product factor: (prefactor, base symbol "p"|"ps", side, power)
# side +1: argument z2/z1 = x;  side -1: argument z1/z2 = 1/x
Poch = tuple


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    anchor: str
    description: str
    left: str
    right: str
    kind: str  # "series" (product claim) or "theta" (bracket/theta claim)
    claim: Callable | None = None  # (u1, u2, ctx) -> complex, theta kind
    product: Callable | None = None  # ctx -> list[Poch], series kind
    level_one: bool = False


def _T(ctx, starred):
    return ctx.p_star if starred else ctx.p


def _th(ctx, a, u, starred=False, inv=False):
    """Theta_{p or p*}(q^a z^{+-1}), z = q^{2u}."""
    z = ctx.z_of(-u if inv else u)
    return theta_p(ctx.qpow(a) * z, _T(ctx, starred), ctx)


def product_value(factors, x, ctx: EllipticContext) -> complex:
    val = 1.0 + 0j
    for a, base, side, power in factors:
        X = x if side > 0 else 1 / x
        v = qpoch_raw(a * X, (_T(ctx, base == "ps"),), ctx.cutoff)
        if power < 0 and abs(v) < 1e-300:
            raise PoleError("claimed product denominator", v)
        val *= v**power
    return val


def product_series(factors, side, order, ctx):
    items = [(a, (_T(ctx, base == "ps"),), power) for a, base, s, power in factors if s == side]
    return log_series_poch(items, order)


# ---------------------------------------------------------------------------
# relations


def _props_32(ctx):
    q, p, ps, c, r, rs = ctx.q, ctx.p, ctx.p_star, ctx.c, ctx.r, ctx.r_star
    Q = ctx.qpow
    out = {}
    out["series:u+u-"] = ("u_plus", "u_minus", [
        (p * Q(-c - 2), "p", -1, 1), (ps * Q(c + 2), "ps", -1, 1),
        (p * Q(-c + 1), "p", -1, 1), (ps * Q(c - 1), "ps", -1, 1),
        (p * Q(-c + 2), "p", -1, -1), (ps * Q(c - 2), "ps", -1, -1),
        (p * Q(-c - 1), "p", -1, -1), (ps * Q(c + 1), "ps", -1, -1)])
    out["series:u+x+"] = ("u_plus", "x_plus", [
        (ps * q**2, "ps", -1, 1), (ps / q, "ps", -1, 1),
        (ps / q**2, "ps", -1, -1), (ps * q, "ps", -1, -1)])
    out["series:u+x-"] = ("u_plus", "x_minus", [
        (ps * Q(c - 2), "ps", -1, 1), (ps * Q(c + 1), "ps", -1, 1),
        (ps * Q(c + 2), "ps", -1, -1), (ps * Q(c - 1), "ps", -1, -1)])
    out["series:u-x+"] = ("u_minus", "x_plus", [
        (p * Q(-c - 2), "p", 1, 1), (p * Q(-c + 1), "p", 1, 1),
        (p * Q(-c + 2), "p", 1, -1), (p * Q(-c - 1), "p", 1, -1)])
    out["series:u-x-"] = ("u_minus", "x_minus", [
        (p * q**2, "p", 1, 1), (p / q, "p", 1, 1),
        (p / q**2, "p", 1, -1), (p * q, "p", 1, -1)])
    out["series:psi-u+"] = ("psi", "u_plus", [
        (Q(rs + 2), "p", 1, 1), (Q(rs - 1), "p", 1, 1), (Q(rs - 2), "ps", 1, 1), (Q(rs + 1), "ps", 1, 1),
        (Q(rs - 2), "p", 1, -1), (Q(rs + 1), "p", 1, -1), (Q(rs + 2), "ps", 1, -1), (Q(rs - 1), "ps", 1, -1)])
    out["series:psi-u-"] = ("psi", "u_minus", [
        (Q(r - 2), "p", -1, 1), (Q(r + 1), "p", -1, 1), (Q(r + 2), "ps", -1, 1), (Q(r - 1), "ps", -1, 1),
        (Q(r + 2), "p", -1, -1), (Q(r - 1), "p", -1, -1), (Q(r - 2), "ps", -1, -1), (Q(r + 1), "ps", -1, -1)])
    out["series:psi-x+"] = ("psi", "x_plus", [
        (Q(rs - 2), "p", 1, 1), (Q(rs + 1), "p", 1, 1), (Q(rs + 2), "ps", -1, 1), (Q(rs - 1), "ps", -1, 1),
        (Q(rs + 2), "p", 1, -1), (Q(rs - 1), "p", 1, -1), (Q(rs - 2), "ps", -1, -1), (Q(rs + 1), "ps", -1, -1)])
    out["series:psi-x-"] = ("psi", "x_minus", [
        (Q(r + 2), "p", 1, 1), (Q(r - 1), "p", 1, 1), (Q(r - 2), "ps", -1, 1), (Q(r + 1), "ps", -1, 1),
        (Q(r - 2), "p", 1, -1), (Q(r + 1), "p", 1, -1), (Q(r + 2), "ps", -1, -1), (Q(r - 1), "ps", -1, -1)])
    # basic current k
    out["series:k-u+"] = ("k", "u_plus", [
        (Q(rs + 1), "p", 1, 1), (Q(rs - 1), "ps", 1, 1), (Q(rs - 1), "p", 1, -1), (Q(rs + 1), "ps", 1, -1)])
    out["series:k-u-"] = ("k", "u_minus", [
        (Q(r - 1), "p", -1, 1), (Q(r + 1), "ps", -1, 1), (Q(r + 1), "p", -1, -1), (Q(r - 1), "ps", -1, -1)])
    out["series:k-x+"] = ("k", "x_plus", [
        (Q(rs + 1), "ps", -1, 1), (Q(rs - 1), "p", 1, 1), (Q(rs - 1), "ps", -1, -1), (Q(rs + 1), "p", 1, -1)])
    out["series:k-x-"] = ("k", "x_minus", [
        (Q(r - 1), "ps", -1, 1), (Q(r + 1), "p", 1, 1), (Q(r + 1), "ps", -1, -1), (Q(r - 1), "p", 1, -1)])
    return out


_SERIES_ANCHORS = {
    "series:u+u-": "u^+(z1,p)u^-(z2,p)=u^-(z2,p)u^+(z1,p)...",
    "series:u+x+": "u^+(z1,p)x^+(z2)=...x^+(z2)u^+(z1,p)",
    "series:u+x-": "u^+(z1,p)x^-(z2)=...x^-(z2)u^+(z1,p)",
    "series:u-x+": "u^-(z1,p)x^+(z2)=...x^+(z2)u^-(z1,p)",
    "series:u-x-": "u^-(z1,p)x^-(z2)=...x^-(z2)u^-(z1,p)",
    "series:psi-u+": "psi(z1,p)u^+(z2,p)=u^+(z2,p)psi(z1,p)...",
    "series:psi-u-": "psi(z1,p)u^-(z2,p)=u^-(z2,p)psi(z1,p)...",
    "series:psi-x+": "psi(z1,p)x^+(z2)=x^+(z2)psi(z1,p)...",
    "series:psi-x-": "psi(z1,p)x^-(z2)=x^-(z2)psi(z1,p)...",
    "series:k-u+": "k(z1,p)u^+(z2,p)=...u^+(z2,p)k(z1,p)",
    "series:k-u-": "k(z1,p)u^-(z2,p)=...u^-(z2,p)k(z1,p)",
    "series:k-x+": "k(z1,p)x^+(z2)=...x^+(z2)k(z1,p)",
    "series:k-x-": "k(z1,p)x^-(z2)=...x^-(z2)k(z1,p)",
}


def _theta_claims():
    """id -> (left, right, anchor, claim(u, ctx), level_one)."""

    def b(ctx):
        return Brackets(ctx), Brackets(ctx, True)

    def zpow(ctx, u, a):
        return ctx.qpow(2 * u * a)

    T = {}
    # dressed currents and k
    T["dressed:psi-psi"] = ("psi", "psi", "psi(z1,p)psi(z2,p)=Theta ratio psi(z2,p)psi(z1,p)",
                            lambda u, c: (_th(c, -2, u) * _th(c, 1, u) / (_th(c, 2, u) * _th(c, -1, u))
                                          * _th(c, 2, u, True) * _th(c, -1, u, True)
                                          / (_th(c, -2, u, True) * _th(c, 1, u, True))), False)
    T["dressed:psi-e"] = ("psi", "e", "psi(z1,p)e(z2,p)=Theta_{p*} ratio e(z2,p)psi(z1,p)",
                          lambda u, c: (_th(c, c.r_star + 2, u, True) * _th(c, c.r_star - 1, u, True)
                                        / (_th(c, c.r_star - 2, u, True) * _th(c, c.r_star + 1, u, True))),
                          False)
    T["dressed:psi-f"] = ("psi", "f", "psi(z1,p)f(z2,p)=Theta_p ratio f(z2,p)psi(z1,p)",
                          lambda u, c: (_th(c, c.r - 2, u) * _th(c, c.r + 1, u)
                                        / (_th(c, c.r + 2, u) * _th(c, c.r - 1, u))), False)
    T["dressed:e-e"] = ("e", "e", "e(z1,p)e(z2,p)=(-1)Theta_{p*} ratio e(z2,p)e(z1,p)",
                        lambda u, c: -(_th(c, -2, u, True, True) * _th(c, -1, u, True)
                                       / (_th(c, -2, u, True) * _th(c, -1, u, True, True))), False)
    T["dressed:f-f"] = ("f", "f", "f(z1,p)f(z2,p)=(-1)Theta_p ratio f(z2,p)f(z1,p)",
                        lambda u, c: -(_th(c, 2, u, False, True) * _th(c, 1, u)
                                       / (_th(c, 2, u) * _th(c, 1, u, False, True))), False)
    T["basic:k-k"] = ("k", "k", "k(z1,p)k(z2,p)=z^{-1/r*+1/r}rho(z1/z2)k(z2,p)k(z1,p)",
                     lambda u, c: zpow(c, u, 1 / c.r - 1 / c.r_star) * rho(u, c), False)
    T["basic:k-e"] = ("k", "e", "k(z1,p)e(z2,p)=Theta_{p*}(q^{r*+1}z1/z2)/Theta_{p*}(q^{r*-1}z1/z2)",
                     lambda u, c: _th(c, c.r_star + 1, u, True) / _th(c, c.r_star - 1, u, True), False)
    T["basic:k-f"] = ("k", "f", "k(z1,p)f(z2,p)=Theta_p(q^{r-1}z1/z2)/Theta_p(q^{r+1}z1/z2)",
                     lambda u, c: _th(c, c.r - 1, u) / _th(c, c.r + 1, u), False)

    # elliptic currents E, F, K
    def k_e(u, c):
        _, s = b(c)
        return -s(u + (c.r_star + 1) / 2) / s(u + (c.r_star - 1) / 2)

    def k_f(u, c):
        p_, _ = b(c)
        return -p_(u + (c.r - 1) / 2) / p_(u + (c.r + 1) / 2)

    def e_e(u, c):
        _, s = b(c)
        return -s(u + 1) * s(u - 0.5) / (s(u - 1) * s(u + 0.5))

    def f_f(u, c):
        p_, _ = b(c)
        return -p_(u - 1) * p_(u + 0.5) / (p_(u + 1) * p_(u - 0.5))

    T["elliptic:K-K"] = ("K", "K", "K(z1)K(z2)=rho(z1/z2)K(z2)K(z1)", lambda u, c: rho(u, c), False)
    T["elliptic:K-E"] = ("K", "E", "K(z1)E(z2)=-[u+(r*+1)/2]*/[u+(r*-1)/2]* E(z2)K(z1)", k_e, False)
    T["elliptic:K-F"] = ("K", "F", "K(z1)F(z2)=-[u+(r-1)/2]/[u+(r+1)/2] F(z2)K(z1)", k_f, False)
    T["elliptic:E-E"] = ("E", "E", "E(z1)E(z2)=-[u+1]*[u-1/2]*/([u-1]*[u+1/2]*)E(z2)E(z1)", e_e, False)
    T["elliptic:F-F"] = ("F", "F", "F(z1)F(z2)=-[u-1][u+1/2]/([u+1][u-1/2])F(z2)F(z1)", f_f, False)

    def s_(c):
        return Brackets(c, True)

    def p_(c):
        return Brackets(c)

    T["aux:K+-E"] = ("K_plus", "E", "K_+(z1)E(z2)=-[u+(c-1)/2]*/[u+(c-3)/2]*",
                    lambda u, c: -s_(c)(u + (c.c - 1) / 2) / s_(c)(u + (c.c - 3) / 2), False)
    T["aux:K0-E"] = ("K_zero", "E", "K_0(z1)E(z2)=[u+c/2]*[u+(c-1)/2]*/([u+c/2-1]*[u+(c+1)/2]*)",
                    lambda u, c: (s_(c)(u + c.c / 2) * s_(c)(u + (c.c - 1) / 2)
                                  / (s_(c)(u + c.c / 2 - 1) * s_(c)(u + (c.c + 1) / 2))), False)
    T["aux:K--E"] = ("K_minus", "E", "K_-(z1)E(z2)=-[u+c/2]*/[u+c/2+1]*",
                    lambda u, c: -s_(c)(u + c.c / 2) / s_(c)(u + c.c / 2 + 1), False)
    T["aux:K+-F"] = ("K_plus", "F", "K_+(z1)F(z2)=-[u-3/2]/[u-1/2]",
                    lambda u, c: -p_(c)(u - 1.5) / p_(c)(u - 0.5), False)
    T["aux:K0-F"] = ("K_zero", "F", "K_0(z1)F(z2)=[u-1][u+1/2]/([u][u-1/2])",
                    lambda u, c: p_(c)(u - 1) * p_(c)(u + 0.5) / (p_(c)(u) * p_(c)(u - 0.5)), False)
    T["aux:K--F"] = ("K_minus", "F", "K_-(z1)F(z2)=-[u+1]/[u]",
                    lambda u, c: -p_(c)(u + 1) / p_(c)(u), False)

    # half currents K^+_eps(u) = K_eps(z)
    def hc_mixed(u, c):
        return rho(u, c) * s_(c)(u) * p_(c)(u + 1) / (s_(c)(u + 1) * p_(c)(u))

    T["half:K+-K+"] = ("K_plus", "K_plus", "K_+^+(u1)K_+^+(u2)=rho(u)K_+^+(u2)K_+^+(u1)",
                     lambda u, c: rho(u, c), False)
    T["half:K--K-"] = ("K_minus", "K_minus", "K_-^+(u1)K_-^+(u2)=rho(u)K_-^+(u2)K_-^+(u1)",
                     lambda u, c: rho(u, c), False)
    T["half:K0-K0"] = ("K_zero", "K_zero", "rho(u)rho(u)/(rho(u+1/2)rho(u-1/2))",
                    lambda u, c: rho(u, c) ** 2 / (rho(u + 0.5, c) * rho(u - 0.5, c)), False)
    T["half:K--K+"] = ("K_minus", "K_plus",
                    "K_-^+(u1)K_+^+(u2)=K_+^+(u2)K_-^+(u1)rho(u)[u+1][u+3/2][u]*[u+1/2]*/(...)",
                    lambda u, c: (rho(u, c) * p_(c)(u + 1) * p_(c)(u + 1.5) * s_(c)(u) * s_(c)(u + 0.5)
                                  / (p_(c)(u) * p_(c)(u + 0.5) * s_(c)(u + 1) * s_(c)(u + 1.5))), False)
    T["half:K--K0"] = ("K_minus", "K_zero", "rho(u)[u]*[u+1]/([u+1]*[u])", hc_mixed, False)
    T["half:K0-K+"] = ("K_zero", "K_plus", "rho(u)[u]*[u+1]/([u+1]*[u])", hc_mixed, False)

    # level one free field realisation and vertex operators
    T["level1:E-E"] = ("E1", "E1", "E(z1)E(z2) at c=1 free field", e_e, True)
    T["level1:F-F"] = ("F1", "F1", "F(z1)F(z2) at c=1 free field", f_f, True)
    T["vertex:Phi-E"] = ("Phi_minus", "E1", "Phi_-(u1)E(u2)=E(u2)Phi_-(u1)", lambda u, c: 1.0, True)
    T["vertex:Phi-F"] = ("Phi_minus", "F1", "-[u1-u2+1/2]/[u1-u2-1/2]",
                        lambda u, c: -p_(c)(u + 0.5) / p_(c)(u - 0.5), True)
    T["vertex:Psi*-F"] = ("Psi_star_minus", "F1", "Psi*_-(u1)F(u2)=F(u2)Psi*_-(u1)",
                         lambda u, c: 1.0, True)
    T["vertex:Psi*-E"] = ("Psi_star_minus", "E1", "Psi*_-(u1)E(u2)=-[u1-u2-1/2]*/[u1-u2+1/2]* E(u2)Psi*_-(u1)",
                         lambda u, c: -s_(c)(u - 0.5) / s_(c)(u + 0.5), True)
    T["vertex:Phi-Psi*"] = ("Phi_minus", "Psi_star_minus", "Phi_-(u1)Psi*_-(u2)=chi(u1-u2)Psi*_-(u2)Phi_-(u1)",
                          lambda u, c: chi(u, c), True)
    # Phi(u2)Phi(u1) = R(u1-u2) Phi(u1)Phi(u2): with L = Phi(u1), R = Phi(u2) the factor is mu(-u)
    T["vertex:Phi-Phi"] = ("Phi_minus", "Phi_minus", "R(u,P+h)=mu(u)Rbar, highest components",
                                  lambda u, c: mu(-u, c), True)
    T["vertex:Psi*-Psi*"] = ("Psi_star_minus", "Psi_star_minus",
                                    "R*(u,P)=mu*(u)Rbar*, highest components",
                                    lambda u, c: mu(u, c, True), True)
    return T


def _build() -> dict[str, CatalogEntry]:
    reg = {}
    dummy = EllipticContext(0.5, 4.0)
    for key, (left, right, _) in _props_32(dummy).items():
        reg[key] = CatalogEntry(
            key, _SERIES_ANCHORS[key], f"{left} x {right}: infinite product", left, right, "series",
            product=lambda ctx, key=key: _props_32(ctx)[key][2])
    for key, (left, right, anchor, fn, lvl) in _theta_claims().items():
        reg[key] = CatalogEntry(key, anchor, f"{left} x {right}", left, right, "theta",
                                claim=lambda u1, u2, ctx, fn=fn: fn(u1 - u2, ctx), level_one=lvl)
    return reg


REGISTRY: dict[str, CatalogEntry] = _build()


def list_relations() -> list[str]:
    return list(REGISTRY)


def claimed_factor(entry: CatalogEntry, u1, u2, ctx: EllipticContext) -> complex:
    if entry.kind == "series":
        return product_value(entry.product(ctx), ctx.qpow(2 * (u2 - u1)), ctx)
    return entry.claim(u1, u2, ctx)


def computed_factor(entry: CatalogEntry, u1, u2, ctx: EllipticContext) -> complex:
    cur = standard_currents(ctx)
    return exchange_factor(cur[entry.left], cur[entry.right], ctx)(u1, u2)


def _context_for(entry, ctx):
    if entry.level_one and ctx.c != 1.0:
        return ctx.with_(c=1.0)
    return ctx


def _draw_pair(rng, ctx):
    re, im = u_box(ctx)
    u2 = complex(rng.uniform(-re / 2, re / 2), rng.uniform(-im, im)) * 0.25
    return draw_u(rng, ctx) + u2, u2


def verify_relation(rel_id: str, ctx: EllipticContext, n_samples: int = 20, order: int = 30,
                    seed: int = 0, tol: float = 1e-10, perturb: complex = 1.0) -> CheckReport:
    """Exchange factor from the free field against the claimed factor.

    Series-type relations are also compared coefficientwise (log of the
    one-sided products through `order`).  `perturb` scales the claim, for
    negative controls.
    """
    entry = REGISTRY[rel_id]
    ctx = _context_for(entry, ctx)
    rng = rng_for(seed, "relation:" + rel_id)

    def ev(pair):
        u1, u2 = pair
        got = computed_factor(entry, u1, u2, ctx)
        want = perturb * claimed_factor(entry, u1, u2, ctx)
        if not np.isfinite(got) or not np.isfinite(want):
            raise PoleError("non-finite factor")
        return rel_residual(got, want)

    samples = sample_until(rng, lambda r: _draw_pair(r, ctx), ev, n_samples)
    worst = max(v for _, v in samples)
    notes = {"value_residual": worst}
    if entry.kind == "series":
        coef = series_residual(rel_id, ctx, order, perturb)
        notes["series_residual"] = coef
        worst = max(worst, coef)
    return CheckReport(f"relation:{rel_id}", entry.anchor,
                       {"q": ctx.q, "r": ctx.r, "c": ctx.c, "order": order, "perturb": perturb},
                       n_samples, worst, tol, notes=notes)


def series_residual(rel_id: str, ctx: EllipticContext, order: int = 30, perturb: complex = 1.0) -> float:
    """Max coefficient mismatch between computed and claimed log series.

    A scaled claim shows up as a nonzero constant term.
    """
    entry = REGISTRY[rel_id]
    cur = standard_currents(ctx)
    ef = exchange_factor(cur[entry.left], cur[entry.right], ctx)
    facs = entry.product(ctx)
    worst = 0.0
    for side in (1, -1):
        got = ef.series(side, order).coeffs
        want = product_series(facs, side, order, ctx).coeffs.copy()
        if side == 1:
            want[0] += cmath.log(perturb)
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst


def contraction_series(left: str, right: str, ctx: EllipticContext, direction: int = 1, order: int = 30):
    cur = standard_currents(ctx)
    return exchange_factor(cur[left], cur[right], ctx).series(direction, order)


def check_double_swap(rel_id: str, ctx: EllipticContext, n_samples: int = 10, seed: int = 0,
                      tol: float = 1e-10) -> CheckReport:
    """phi_{LR}(u1, u2) phi_{RL}(u2, u1) = 1."""
    entry = REGISTRY[rel_id]
    ctx = _context_for(entry, ctx)
    cur = standard_currents(ctx)
    a = exchange_factor(cur[entry.left], cur[entry.right], ctx)
    b = exchange_factor(cur[entry.right], cur[entry.left], ctx)
    rng = rng_for(seed, "swap:" + rel_id)
    res = sample_until(rng, lambda r: _draw_pair(r, ctx),
                       lambda pr: abs(a(pr[0], pr[1]) * b(pr[1], pr[0]) - 1), n_samples)
    return CheckReport(f"double_swap:{rel_id}", entry.anchor, {"q": ctx.q, "r": ctx.r, "c": ctx.c},
                       n_samples, max(v for _, v in res), tol)
