"""Currents as exponentials of oscillators times zero-mode words, and the
exchange factor between two of them."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from ..context import EllipticContext
from ..qseries import qpoch_raw
from ..report import PoleError
from ..series import PowerSeries
from .modes import BosonFamily, QMono, QPoly, commutator_poly, to_a_basis
from .zeromodes import ZTemplate, exchange_scalar, instantiate


@dataclass(frozen=True)
class Generic:
    """A Drinfeld current x^{+} (sign +1) or x^{-} (sign -1) at argument q^{2 du} z."""

    sign: int
    du: float = 0.0


@dataclass(frozen=True)
class ModeCoupling:
    """exp(sum cre(n) a_-n z^n) exp(sum ann(n) a_n z^-n) * generics * zero word.

    Coefficients are stored in the a-oscillator basis; `family` records the
    oscillator family the defining formula was written in.
    """

    name: str
    ann: QPoly = field(default_factory=QPoly)
    cre: QPoly = field(default_factory=QPoly)
    generics: tuple = ()
    zero: tuple = ()  # ((ZTemplate, du), ...)
    family: BosonFamily = BosonFamily.A

    def zero_word(self, u: complex, log_q: float):
        word = []
        for t, du in self.zero:
            word.extend(instantiate([t], u + du, log_q))
        return tuple(word)


def from_family(name, family: BosonFamily, ann: QPoly, cre: QPoly, ctx, zero=(), generics=()):
    fa, fc = to_a_basis(family, ctx)
    return ModeCoupling(name, ann * fa, cre * fc, tuple(generics),
                        tuple((t, 0.0) for t in zero), family)


def _neg_template(t: ZTemplate) -> ZTemplate:
    if t.kind == "X":
        return ZTemplate("X", tuple(-a for a in t.vec))
    if t.kind == "S":
        return ZTemplate("S", (), 1 / t.scalar)
    return ZTemplate(t.kind, tuple(-a for a in t.vec))


def shifted(cur: ModeCoupling, du: float, name: str | None = None) -> ModeCoupling:
    """The current at argument q^{2 du} z."""
    return compose(name or cur.name, [(cur, du, 1)])


def inverse(cur: ModeCoupling, name: str | None = None) -> ModeCoupling:
    return compose(name or f"{cur.name}^-1", [(cur, 0.0, -1)])


def compose(name: str, parts, zero_after=()) -> ModeCoupling:
    """Product of currents [(current, du, power)], power = +1 or -1, in order."""
    ann, cre = QPoly(), QPoly()
    gens, zero = [], []
    for cur, du, power in parts:
        if power not in (1, -1):
            raise ValueError("power must be +1 or -1")
        ann = ann + cur.ann * QPoly.qpow(-2 * du) * power
        cre = cre + cur.cre * QPoly.qpow(2 * du) * power
        if cur.generics and power == -1:
            raise ValueError("Drinfeld currents x^{+-} have no inverse")
        gens.extend(Generic(g.sign, g.du + du) for g in cur.generics)
        zs = [(t, d + du) for t, d in cur.zero]
        if power == -1:
            zs = [(_neg_template(t), d) for t, d in reversed(zs)]
        zero.extend(zs)
    zero.extend((t, 0.0) for t in zero_after)
    fams = {cur.family for cur, _, _ in parts}
    fam = fams.pop() if len(fams) == 1 else BosonFamily.A
    return ModeCoupling(name, ann, cre, tuple(gens), tuple(zero), fam)


def charge_poly(sign: int, ctx: EllipticContext) -> QPoly:
    """n * g(n) with [a_{+-n}, x^{sign}(z)] = g(+-n) z^{+-n} x^{sign}(z); even in n."""
    if sign > 0:
        return QPoly([QMono.make(1.0, -ctx.c, {1.0: 1}, 1)])
    return QPoly([QMono.make(-1.0, 0.0, {1.0: 1}, 1)])


# ---------------------------------------------------------------------------
# exchange factor  L(z1) R(z2) = phi * R(z2) L(z1)


@dataclass(frozen=True)
class LogTerm:
    """exp(sigma * sum_n (1/n) P(n) X^n) with X = x (direction +1) or 1/x (-1)."""

    poly: QPoly
    direction: int
    sigma: int


@dataclass(frozen=True)
class ProductFactor:
    """(q^e X; bases)_inf ** power, X = x or 1/x."""

    e: float
    bases: tuple
    direction: int
    power: complex


@dataclass
class ExchangeFactor:
    left: ModeCoupling
    right: ModeCoupling
    ctx: EllipticContext
    logs: tuple
    factors: tuple
    rational: tuple  # ((sign, du_left, du_right), ...) Drinfeld x-x factors
    integral: bool

    def modes(self, x):
        """Oscillator part evaluated as a meromorphic function of x = z2/z1."""
        q = self.ctx.q
        val = 1.0 + 0j
        for f in self.factors:
            X = x if f.direction > 0 else 1 / x
            p = qpoch_raw(q**f.e * X, f.bases, self.ctx.cutoff)
            if f.power.real < 0 and abs(p) < 1e-300:
                raise PoleError(f"(q^{f.e} X; {f.bases})", p)
            if f.power.imag == 0 and float(f.power.real).is_integer():
                val *= p ** int(f.power.real)
            else:
                val *= cmath.exp(f.power * cmath.log(p))
        for sign, dl, dr in self.rational:
            val *= _drinfeld_xx(sign, x * self.ctx.q ** (2 * (dr - dl)), self.ctx.q)
        return val

    def zero_scalar(self, u1, u2):
        lq = self.ctx.log_q
        return exchange_scalar(self.left.zero_word(u1, lq), self.right.zero_word(u2, lq))

    def __call__(self, u1, u2):
        x = self.ctx.qpow(2 * (u2 - u1))
        return self.modes(x) * self.zero_scalar(u1, u2)

    def series(self, direction: int, order: int) -> PowerSeries:
        """log of the oscillator part, one side (powers of x or of 1/x)."""
        n = np.arange(1, order + 1)
        coeffs = np.zeros(order + 1, dtype=complex)
        for t in self.logs:
            if t.direction == direction:
                coeffs[1:] += t.sigma * t.poly.value(self.ctx.q, n) / n
        return PowerSeries(coeffs)


def _drinfeld_xx(sign, y, q):
    # x(w1) x(w2) = phi(y) x(w2) x(w1), y = w2/w1
    if sign > 0:
        a, b = q**2, 1 / q
    else:
        a, b = q**-2, q
    den = (1 - a * y) * (1 - b * y)
    if abs(den) < 1e-300:
        raise PoleError("Drinfeld x-x denominator", den)
    return -(a - y) * (b - y) / den


@lru_cache(maxsize=4096)
def exchange_factor(left: ModeCoupling, right: ModeCoupling, ctx: EllipticContext) -> ExchangeFactor:
    A = commutator_poly(ctx)
    logs = []
    # oscillator against oscillator
    logs.append(LogTerm(left.ann * right.cre * A, +1, +1))
    logs.append(LogTerm(right.ann * left.cre * A, -1, -1))
    # left oscillators against right Drinfeld currents
    for g in right.generics:
        ch = charge_poly(g.sign, ctx)
        logs.append(LogTerm(left.ann * ch * QPoly.qpow(2 * g.du), +1, +1))
        logs.append(LogTerm(left.cre * ch * QPoly.qpow(-2 * g.du), -1, +1))
    # left Drinfeld currents against right oscillators: inverse of the reversed pair
    for g in left.generics:
        ch = charge_poly(g.sign, ctx)
        logs.append(LogTerm(right.ann * ch * QPoly.qpow(2 * g.du), -1, -1))
        logs.append(LogTerm(right.cre * ch * QPoly.qpow(-2 * g.du), +1, -1))
    rational = []
    for gl in left.generics:
        for gr in right.generics:
            if gl.sign == gr.sign:
                rational.append((gl.sign, gl.du, gr.du))
    factors = []
    integral = True
    for t in logs:
        if not t.poly:
            continue
        for w, e, bases in t.poly.product_terms(ctx.q):
            power = -t.sigma * w
            if abs(power.imag) > 1e-9 or abs(power.real - round(power.real)) > 1e-9:
                integral = False
            else:
                power = complex(round(power.real))
            if power != 0:
                factors.append(ProductFactor(e, bases, t.direction, complex(power)))
    return ExchangeFactor(left, right, ctx, tuple(t for t in logs if t.poly), tuple(factors),
                          tuple(rational), integral)


def contraction_value(left: ModeCoupling, right: ModeCoupling, ctx: EllipticContext, x: complex = 1.0) -> complex:
    """Scalar from normal ordering left(z1) right(z2), x = z2/z1, resummed as products.

    Only the oscillator parts contribute; shifts already built into the
    couplings are included, so x = 1 gives coincident nominal arguments.
    """
    poly = left.ann * right.cre * commutator_poly(ctx)
    val = 1.0 + 0j
    for w, e, bases in poly.product_terms(ctx.q):
        p = qpoch_raw(ctx.q**e * x, bases, ctx.cutoff)
        if w.real > 0 and abs(p) < 1e-300:
            raise PoleError(f"(q^{e} x; {bases})", p)
        k = round(w.real)
        val *= p ** (-k) if abs(w - k) < 1e-9 else cmath.exp(-w * cmath.log(p))
    return val
