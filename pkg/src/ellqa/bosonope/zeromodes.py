"""Zero-mode words built from the Heisenberg generators.

Position-type generators X = (Q, abar, alpha) and momentum-type generators
Y = (P, h) with the only nonzero brackets

    [P, Q] = 1,   [h, alpha] = 2,   [Q, abar] = pi i,

so alpha_hat = alpha + abar.  Every symbol is an exponential of a linear form,
hence all brackets are central and a word has a normal form

    scalar * e^{v.X} * e^{l.Y}

reached with e^A e^B = e^B e^A e^{[A,B]} and e^A e^B = e^{A+B} e^{[A,B]/2}.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

# bracket [Y_i, X_j]
_YX = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 2.0]])
# bracket [X_i, X_j]
_XX = np.array([[0, 1j * np.pi, 0], [-1j * np.pi, 0, 0], [0, 0, 0]])

Q = np.array([1.0, 0, 0])
ABAR = np.array([0, 1.0, 0])
ALPHA = np.array([0, 0, 1.0])
ALPHA_HAT = ABAR + ALPHA


@dataclass(frozen=True)
class ZSym:
    """One symbol: e^{v.X} (kind 'X'), e^{l.Y} (kind 'Y') or a scalar ('S')."""

    kind: str
    vec: tuple = ()
    scalar: complex = 1.0

    @staticmethod
    def x(v) -> "ZSym":
        return ZSym("X", tuple(float(a) for a in v))

    @staticmethod
    def y(lP: complex, lh: complex) -> "ZSym":
        return ZSym("Y", (complex(lP), complex(lh)))

    @staticmethod
    def s(c: complex) -> "ZSym":
        return ZSym("S", (), complex(c))


def bracket(a: ZSym, b: ZSym) -> complex:
    """[A, B] for A = log a, B = log b (a central number)."""
    if a.kind == "S" or b.kind == "S":
        return 0j
    va, vb = np.array(a.vec), np.array(b.vec)
    if a.kind == "Y" and b.kind == "X":
        return complex(va @ _YX @ vb)
    if a.kind == "X" and b.kind == "Y":
        return -complex(vb @ _YX @ va)
    if a.kind == "X" and b.kind == "X":
        return complex(va @ _XX @ vb)
    return 0j


@dataclass(frozen=True)
class NormalForm:
    log_scalar: complex
    x: tuple
    y: tuple

    @property
    def scalar(self) -> complex:
        return cmath.exp(self.log_scalar)


def normal_form(word) -> NormalForm:
    """Move every X symbol left of every Y symbol, then merge."""
    log_s = 0j
    xs: list[ZSym] = []
    ys: list[ZSym] = []
    for sym in word:
        if sym.kind == "S":
            log_s += cmath.log(sym.scalar)
        elif sym.kind == "Y":
            ys.append(sym)
        else:
            # sym must pass every Y already collected: (Y ... ) sym = sym (Y ...) e^{[Y, sym]}
            for y in ys:
                log_s += bracket(y, sym)
            xs.append(sym)
    # merge the X block left to right: e^A e^B = e^{A+B} e^{[A,B]/2}
    acc = np.zeros(3)
    for sym in xs:
        v = np.array(sym.vec)
        log_s += 0.5 * complex(acc @ _XX @ v)
        acc = acc + v
    yacc = np.zeros(2, dtype=complex)
    for sym in ys:
        yacc = yacc + np.array(sym.vec)
    return NormalForm(log_s, tuple(acc.round(14)), tuple(yacc))


def exchange_scalar(w1, w2) -> complex:
    """c with W1 W2 = c * W2 W1."""
    a = normal_form(tuple(w1) + tuple(w2))
    b = normal_form(tuple(w2) + tuple(w1))
    return cmath.exp(a.log_scalar - b.log_scalar)


# --- word templates: functions of the additive spectral variable u --------

@dataclass(frozen=True)
class ZTemplate:
    """Symbol recipe evaluated at u (z = q^{2u}).

    kind 'X': e^{v.X}
    kind 'ZPOW': z^{aP + b h + c0}   (vec = (a, b, c0))
    kind 'QPOW': q^{aP + b h + c0}   (vec = (a, b, c0))
    kind 'S':    numeric constant
    """

    kind: str
    vec: tuple = ()
    scalar: complex = 1.0

    def at(self, u: complex, log_q: float) -> ZSym:
        if self.kind == "X":
            return ZSym.x(self.vec)
        if self.kind == "S":
            return ZSym.s(self.scalar)
        a, b, c0 = self.vec
        t = 2 * u * log_q if self.kind == "ZPOW" else log_q
        return ZSym("Y", (complex(a * t), complex(b * t)))

    def scalar_at(self, u: complex, log_q: float) -> complex:
        """The numeric constant carried by a power symbol (z^{c0} or q^{c0})."""
        if self.kind in ("ZPOW", "QPOW"):
            t = 2 * u * log_q if self.kind == "ZPOW" else log_q
            return cmath.exp(self.vec[2] * t)
        return 1.0


def ex(v) -> ZTemplate:
    return ZTemplate("X", tuple(float(a) for a in v))


def zpow(a=0.0, b=0.0, c0=0.0) -> ZTemplate:
    return ZTemplate("ZPOW", (float(a), float(b), float(c0)))


def qpow(a=0.0, b=0.0, c0=0.0) -> ZTemplate:
    return ZTemplate("QPOW", (float(a), float(b), float(c0)))


def instantiate(templates, u: complex, log_q: float):
    word = []
    for t in templates:
        word.append(t.at(u, log_q))
        s = t.scalar_at(u, log_q)
        if s != 1.0:
            word.append(ZSym.s(s))
    return tuple(word)
