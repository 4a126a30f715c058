"""Truncated one-variable power series with complex coefficients."""
from __future__ import annotations

import numpy as np


class PowerSeries:
    """sum_{k=0..N} c_k x^k, optionally times x^shift (shift kept symbolic)."""

    __slots__ = ("coeffs", "shift")

    def __init__(self, coeffs, shift: complex = 0):
        self.coeffs = np.array(coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d sequence")
        self.shift = shift

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def zero(cls, order: int) -> "PowerSeries":
        return cls(np.zeros(order + 1))

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = 1
        return cls(c)

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            return self.coeffs[: n + 1], other.coeffs[: n + 1]
        c = np.zeros_like(self.coeffs)
        c[0] = other
        return self.coeffs, c

    def __add__(self, other):
        if isinstance(other, PowerSeries) and other.shift != self.shift:
            raise ValueError("cannot add series with different monomial shifts")
        a, b = self._coerce(other)
        return PowerSeries(a + b, self.shift)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(-self.coeffs, self.shift)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries(self.coeffs * other, self.shift)
        n = min(self.order, other.order)
        prod = np.convolve(self.coeffs[: n + 1], other.coeffs[: n + 1])[: n + 1]
        return PowerSeries(prod, self.shift + other.shift)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1], self.shift)

    def exp(self) -> "PowerSeries":
        if self.shift != 0:
            raise ValueError("exp of a shifted series is not a power series")
        # f' = g' f, solved recursively
        n = self.order
        g = self.coeffs
        f = np.zeros(n + 1, dtype=complex)
        f[0] = np.exp(g[0])
        k = np.arange(n + 1)
        for j in range(1, n + 1):
            f[j] = np.dot(k[1 : j + 1] * g[1 : j + 1], f[j - 1 :: -1][:j]) / j
        return PowerSeries(f)

    def log(self) -> "PowerSeries":
        if self.shift != 0:
            raise ValueError("log of a shifted series is not a power series")
        f = self.coeffs
        if f[0] == 0:
            raise ValueError("log needs a nonzero constant term")
        n = self.order
        g = np.zeros(n + 1, dtype=complex)
        g[0] = np.log(f[0])
        k = np.arange(n + 1)
        # j f_0 g_j = j f_j - sum_{i=1}^{j-1} i g_i f_{j-i}
        for j in range(1, n + 1):
            acc = j * f[j] - np.dot(k[1:j] * g[1:j], f[j - 1 : 0 : -1])
            g[j] = acc / (j * f[0])
        return PowerSeries(g)

    def __call__(self, x):
        val = np.polyval(self.coeffs[::-1], x)
        if self.shift:
            val = val * np.exp(self.shift * np.log(x))
        return val

    def allclose(self, other: "PowerSeries", atol: float) -> bool:
        a, b = self._coerce(other)
        return bool(np.max(np.abs(a - b)) <= atol)

    def __repr__(self):
        return f"PowerSeries(order={self.order}, shift={self.shift}, c0..c3={self.coeffs[:4]})"
