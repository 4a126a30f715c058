"""Global parameters shared by every evaluation: q, r, the level c and the
quantities derived from them."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field, replace

MAX_CUTOFF = 512
# extra factors per base on top of the tolerance rule; covers arguments up to
# |z| ~ t^-4, i.e. the whole sampling rectangle |Re u| <= 2r
CUTOFF_MARGIN = 4


class BracketKind(enum.Enum):
    PLAIN = "plain"
    PLUS = "plus"
    STAR = "star"
    STAR_PLUS = "star_plus"

    @property
    def starred(self) -> bool:
        return self in (BracketKind.STAR, BracketKind.STAR_PLUS)

    @property
    def plus(self) -> bool:
        return self in (BracketKind.PLUS, BracketKind.STAR_PLUS)


def default_cutoff(q: float, r: float, c: float, tol: float) -> int:
    """Smallest N with max(p, q^6)^N < tol/100, plus a fixed margin."""
    t = max(q ** (2 * r), q ** (2 * (r - c)), q**6)
    target = tol * 1e-2
    n = math.ceil(math.log(target) / math.log(t))
    return min(max(n, 1) + CUTOFF_MARGIN, MAX_CUTOFF)


@dataclass(frozen=True)
class EllipticContext:
    q: float
    r: float
    c: float = 1.0
    tol: float = 1e-12
    product_cutoff: int | None = None
    series_order: int = 30
    _cutoff: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if self.c < 0:
            raise ValueError(f"level c must be >= 0, got {self.c}")
        if not self.r > self.c:
            raise ValueError(f"need r > c (so that r* > 0), got r={self.r}, c={self.c}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.series_order < 1:
            raise ValueError("series_order must be >= 1")
        n = self.product_cutoff
        if n is None:
            n = default_cutoff(self.q, self.r, self.c, self.tol)
        elif not (1 <= n <= MAX_CUTOFF):
            raise ValueError(f"product_cutoff must be in [1, {MAX_CUTOFF}]")
        object.__setattr__(self, "_cutoff", int(n))

    @property
    def cutoff(self) -> int:
        return self._cutoff

    @property
    def r_star(self) -> float:
        return self.r - self.c

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def p(self) -> float:
        return self.q ** (2 * self.r)

    @property
    def p_star(self) -> float:
        return self.q ** (2 * self.r_star)

    @property
    def tau(self) -> complex:
        # p = exp(-2 pi i / tau)
        return -1j * math.pi / (self.r * self.log_q)

    @property
    def tau_star(self) -> complex:
        return -1j * math.pi / (self.r_star * self.log_q)

    def nome(self, starred: bool = False) -> tuple[float, float]:
        """(r, p) or (r*, p*)."""
        return (self.r_star, self.p_star) if starred else (self.r, self.p)

    def qpow(self, x):
        """q**x for complex x (entire in x, no branch choice)."""
        return cmath.exp(x * self.log_q) if not hasattr(x, "shape") else _np_exp(x * self.log_q)

    def z_of(self, u):
        """z = q^{2u}."""
        return self.qpow(2 * u)

    def with_(self, **changes) -> "EllipticContext":
        if "q" in changes or "r" in changes or "c" in changes or "tol" in changes:
            changes.setdefault("product_cutoff", None)
        return replace(self, **changes)

    def truncation_tail(self) -> float:
        """Geometric bound on the relative error from dropping factors."""
        t = max(self.p, self.p_star, self.q**6)
        return t ** (self._cutoff - CUTOFF_MARGIN) / (1 - t)


def _np_exp(x):
    import numpy as np

    return np.exp(x)
