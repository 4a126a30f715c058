"""Symbolic mode coefficients and the boson commutators.

A coefficient c(n), n > 0, is a finite sum of monomials

    const * q^{e n} * prod_k [k n]_q^{j_k} * T(n)^t,     T(n) = q^n + q^-n - 1,

with numeric exponents (the context fixes q, r, c).  Such sums can be turned
into products: sum_n (1/n) c(n) x^n is a finite combination of logarithms of
multi-base q-Pochhammer symbols, which is how every exchange factor is
evaluated as a meromorphic function.
"""
from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from ..context import EllipticContext

_ND = 10  # rounding digits for exponent keys


def _key(x: float) -> float:
    v = round(float(x), _ND)
    return 0.0 if v == 0 else v


@dataclass(frozen=True)
class QMono:
    coef: complex
    e: float = 0.0
    qints: tuple = ()  # sorted ((k, power), ...) with k > 0
    tpow: int = 0

    @staticmethod
    def make(coef=1.0, e=0.0, qints=None, tpow=0) -> "QMono":
        acc: dict[float, int] = defaultdict(int)
        coef = complex(coef)
        for k, j in (qints or {}).items() if isinstance(qints, dict) else (qints or ()):
            k = _key(k)
            if k == 0:
                if j > 0:
                    return QMono(0j)
                raise ZeroDivisionError("[0 n]_q in a denominator")
            if k < 0:
                k = -k
                coef *= (-1) ** j
            acc[k] += j
        items = tuple(sorted((k, j) for k, j in acc.items() if j != 0))
        return QMono(coef, _key(e), items, int(tpow))

    def __mul__(self, other: "QMono") -> "QMono":
        d: dict[float, int] = defaultdict(int)
        for k, j in self.qints + other.qints:
            d[k] += j
        return QMono.make(self.coef * other.coef, self.e + other.e, d, self.tpow + other.tpow)

    def value(self, q: float, n):
        n = np.asarray(n, dtype=float)
        v = self.coef * q ** (self.e * n)
        for k, j in self.qints:
            v = v * ((q ** (k * n) - q ** (-k * n)) / (q - 1 / q)) ** j
        if self.tpow:
            v = v * (q**n + q ** (-n) - 1) ** self.tpow
        return v


class QPoly:
    """Sum of QMono terms."""

    __slots__ = ("monos",)

    def __init__(self, monos=()):
        self.monos = tuple(m for m in monos if m.coef != 0)

    @classmethod
    def const(cls, c) -> "QPoly":
        return cls([QMono.make(c)])

    @classmethod
    def qpow(cls, e, c=1.0) -> "QPoly":
        return cls([QMono.make(c, e)])

    @classmethod
    def qint(cls, k, power=1, c=1.0) -> "QPoly":
        return cls([QMono.make(c, 0.0, {k: power})])

    @classmethod
    def tfun(cls, power=1) -> "QPoly":
        return cls([QMono.make(1.0, 0.0, None, power)])

    def __add__(self, other):
        return QPoly(self.monos + _as_poly(other).monos)

    __radd__ = __add__

    def __neg__(self):
        return QPoly([QMono(-m.coef, m.e, m.qints, m.tpow) for m in self.monos])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __mul__(self, other):
        other = _as_poly(other)
        return QPoly([a * b for a in self.monos for b in other.monos])

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.monos)

    def __eq__(self, other):
        return isinstance(other, QPoly) and self.monos == other.monos

    def __hash__(self):
        return hash(self.monos)

    def value(self, q: float, n):
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=complex)
        for m in self.monos:
            out = out + m.value(q, n)
        return out

    def product_terms(self, q: float):
        """Rewrite sum_n (1/n) c(n) x^n as sum_k w_k * sum_n (b_k x)^n / (n prod(1 - t^n)).

        Returns a tuple of (w, e, bases) with b = q^e; the series then equals
        -sum_k w_k log (q^{e_k} x; bases_k).
        """
        acc: dict[tuple, complex] = defaultdict(complex)
        for m in self.monos:
            for w, e, bases in _expand_mono(m, q):
                key = (_key(e), tuple(sorted(_key(b) for b in bases)))
                acc[key] += w
        return tuple((w, e, bases) for (e, bases), w in sorted(acc.items()) if abs(w) > 1e-12)


def _as_poly(x) -> QPoly:
    return x if isinstance(x, QPoly) else QPoly.const(x)


def _expand_mono(m: QMono, q: float):
    # each factor -> list of (weight, exponent, bases); then take the product
    factors = [[(m.coef, m.e, ())]]
    dq = q - 1 / q
    for k, j in m.qints:
        if j > 0:
            terms = [(math.comb(j, i) * (-1) ** i / dq**j, (j - 2 * i) * k, ()) for i in range(j + 1)]
        else:
            jj = -j
            terms = [((-dq) ** jj, jj * k, tuple([q ** (2 * k)] * jj))]
        factors.append(terms)
    if m.tpow > 0:
        base = [(1.0, 1.0), (1.0, -1.0), (-1.0, 0.0)]
        factors.append(_power_terms(base, m.tpow, ()))
    elif m.tpow < 0:
        base = [(1.0, 1.0), (1.0, 2.0), (-1.0, 4.0), (-1.0, 5.0)]
        factors.append(_power_terms(base, -m.tpow, tuple([q**6] * (-m.tpow))))
    out = []
    for combo in iproduct(*factors):
        w, e, bases = 1.0 + 0j, 0.0, ()
        for cw, ce, cb in combo:
            w *= cw
            e += ce
            bases += cb
        out.append((w, e, bases))
    return out


def _power_terms(base, j, bases):
    terms: dict[float, complex] = defaultdict(complex)
    for combo in iproduct(base, repeat=j):
        c, e = 1.0, 0.0
        for bc, be in combo:
            c *= bc
            e += be
        terms[_key(e)] += c
    return [(c, e, bases) for e, c in terms.items() if c != 0]


class BosonFamily(enum.Enum):
    A = "a"
    ALPHA = "alpha"
    BETA = "beta"


def commutator_poly(ctx: EllipticContext) -> QPoly:
    """n * [a_n, a_-n] as a QPoly: [n] T(n) q^{-cn} [cn]."""
    if ctx.c == 0:
        return QPoly()
    return QPoly([QMono.make(1.0, -ctx.c, {1.0: 1}, 1) * QMono.make(1.0, 0.0, {ctx.c: 1})])


def to_a_basis(family: BosonFamily, ctx: EllipticContext):
    """(annihilation, creation) factors with X_n = f_ann * a_n, X_-n = f_cre * a_-n."""
    r, rs, c = ctx.r, ctx.r_star, ctx.c
    if family is BosonFamily.A:
        return QPoly.const(1), QPoly.const(1)
    if family is BosonFamily.ALPHA:
        return QPoly.const(1), QPoly([QMono.make(1.0, c, _ratio_qints(r, rs))])
    return QPoly([QMono.make(1.0, 0.0, _ratio_qints(rs, r))]), QPoly.qpow(c)


def _ratio_qints(num: float, den: float) -> dict:
    # [num n]/[den n]; a dict literal would drop a key when num == den
    return {} if num == den else {num: 1, den: -1}


def family_commutator_poly(family: BosonFamily, ctx: EllipticContext) -> QPoly:
    ann, cre = to_a_basis(family, ctx)
    return ann * cre * commutator_poly(ctx)


def mode_commutator(family: BosonFamily | str, m: int, ctx: EllipticContext) -> float:
    """Coefficient A(m) in [X_m, X_n] = delta_{m+n,0} A(m); A(-m) = -A(m)."""
    family = BosonFamily(family)
    m = int(m)
    if m == 0:
        raise ValueError("zero mode has no oscillator commutator")
    n = abs(m)
    val = family_commutator_poly(family, ctx).value(ctx.q, n) / n
    return float(np.real(val)) * (1 if m > 0 else -1)
