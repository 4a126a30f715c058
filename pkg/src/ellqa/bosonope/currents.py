"""The named currents, written once as oscillator/zero-mode data."""
from __future__ import annotations

from functools import lru_cache

from ..context import EllipticContext
from .couplings import Generic, ModeCoupling, compose, from_family, inverse, shifted
from .modes import BosonFamily, QMono, QPoly
from .zeromodes import ABAR, ALPHA, ALPHA_HAT, Q, ex, qpow, zpow


def _m(c=1.0, e=0.0, qints=None, t=0):
    return QPoly([QMono.make(c, e, qints or {}, t)])


@lru_cache(maxsize=32)
def standard_currents(ctx: EllipticContext) -> dict[str, ModeCoupling]:
    r, rs, c = ctx.r, ctx.r_star, ctx.c
    A, AL, BE = BosonFamily.A, BosonFamily.ALPHA, BosonFamily.BETA
    cur: dict[str, ModeCoupling] = {}

    cur["u_plus"] = from_family("u_plus", A, QPoly(), _m(1, r, {rs: -1}), ctx)
    cur["u_minus"] = from_family("u_minus", A, _m(-1, r, {r: -1}), QPoly(), ctx)
    cur["x_plus"] = ModeCoupling("x_plus", generics=(Generic(+1),), zero=((ex(ALPHA), 0.0),))
    cur["x_minus"] = ModeCoupling("x_minus", generics=(Generic(-1),), zero=((ex(-ALPHA), 0.0),))
    # psi(z,p): creation q^{cn}/[r* n], annihilation -1/[r n]
    cur["psi"] = from_family("psi", A, _m(-1, 0, {r: -1}), _m(1, c, {rs: -1}), ctx)
    # k(z,p): -sum [m]/([rm]([2m]-[m])) alpha_m z^-m, and [2m]-[m] = [m] T(m)
    cur["k"] = from_family("k", AL, _m(-1, 0, {r: -1}, -1), _m(1, 0, {r: -1}, -1), ctx)

    cur["e"] = compose("e", [(cur["u_plus"], 0, 1), (cur["x_plus"], 0, 1)])
    cur["f"] = compose("f", [(cur["x_minus"], 0, 1), (cur["u_minus"], 0, 1)])

    cur["E"] = compose("E", [(cur["e"], 0, 1)], [ex(ABAR), ex(-Q), zpow(-1 / rs)])
    cur["F"] = compose("F", [(cur["f"], 0, 1)], [ex(-ABAR), zpow(1 / r, 1 / (2 * r))])
    cur["K"] = compose("K", [(cur["k"], 0, 1)], [ex(-Q), zpow(1 / r - 1 / rs, 1 / (2 * r))])
    cur["H"] = compose("H", [(cur["psi"], 0, 1)], [ex(-Q), zpow(1 / r - 1 / rs, 1 / (2 * r))])

    K = cur["K"]
    cur["K_plus"] = shifted(K, (r - 2) / 2, "K_plus")
    cur["K_zero"] = compose("K_zero", [(K, r / 2, -1), (K, (r - 1) / 2, 1)])
    cur["K_minus"] = compose("K_minus", [(K, (r + 1) / 2, -1)])
    cur["K_minus_inv"] = inverse(cur["K_minus"], "K_minus_inv")
    cur["K_zero_inv"] = inverse(cur["K_zero"], "K_zero_inv")

    # level-one free field realisation (meaningful for c = 1)
    cur["E1"] = from_family("E1", AL, _m(-1, 0, {1: -1}), _m(1, 0, {1: -1}), ctx,
                            [ex(ALPHA_HAT), zpow(0, 0.5, 0.5), ex(-Q), zpow(-1 / rs)])
    cur["F1"] = from_family("F1", BE, _m(1, 0, {1: -1}), _m(-1, 0, {1: -1}), ctx,
                            [ex(-ALPHA_HAT), zpow(0, -0.5, 0.5), zpow(1 / r, 1 / (2 * r))])
    # highest components of the vertex operators
    cur["Phi_minus"] = from_family(
        "Phi_minus", BE, _m(-1, 0, {1: -1}, -1), _m(1, 0, {1: -1}, -1), ctx,
        [ex(ALPHA_HAT), zpow(0, 0.5, 0.5), zpow(-1 / r, -1 / (2 * r), -1 / r)])
    cur["Psi_star_minus"] = from_family(
        "Psi_star_minus", AL, _m(1, 0, {1: -1}, -1), _m(-1, 0, {1: -1}, -1), ctx,
        [ex(-ALPHA_HAT), zpow(0, -0.5, 0.5), ex(Q), zpow(1 / rs, 0, 1 / rs)])
    K1 = cur["K"]
    cur["K1_minus"] = compose("K1_minus", [(K1, (r + 1) / 2, -1)])
    return cur
