"""Check outcomes, pole signalling and per-check random streams."""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np


class PoleError(ArithmeticError):
    """A denominator factor vanished (|factor| below POLE_EPS)."""

    def __init__(self, factor: str, value: complex = 0j):
        super().__init__(f"pole: {factor} = {value!r}")
        self.factor = factor
        self.value = value


POLE_EPS = 1e-14


def guard(value: complex, factor: str) -> complex:
    if abs(value) < POLE_EPS:
        raise PoleError(factor, value)
    return value


@dataclass
class CheckReport:
    name: str
    anchor: str
    params: dict[str, Any]
    n_samples: int
    max_residual: float
    tolerance: float
    passed: bool = field(init=False)
    errored: bool = False
    details: list[dict[str, Any]] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.max_residual = float(self.max_residual)
        ok = math.isfinite(self.max_residual) and self.max_residual < self.tolerance
        self.passed = bool(ok and not self.errored)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["max_residual"] = _jsonable(self.max_residual)
        d["details"] = [_clean(x) for x in self.details]
        d["notes"] = _clean(self.notes)
        d["params"] = _clean(self.params)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CheckReport":
        d = dict(d)
        passed = d.pop("passed")
        mr = d.pop("max_residual")
        rep = cls(max_residual=float(mr) if mr is not None else math.inf, **d)
        rep.passed = passed
        return rep

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} {self.max_residual:.3e} {self.tolerance:.1e} {self.anchor}"


def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [_jsonable(x.real), _jsonable(x.imag)]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    return _jsonable(obj)


def rng_for(seed: int, name: str) -> np.random.Generator:
    """Independent stream per (seed, check name)."""
    h = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return np.random.default_rng(int.from_bytes(h[:8], "little"))


def rel_residual(lhs, rhs, scale=None) -> float:
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if scale is None:
        scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)))
    if scale == 0:
        return float(np.max(np.abs(lhs - rhs)))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def sample_until(rng, draw, evaluate, n: int, max_retries: int = 50):
    """Collect n evaluations, redrawing any sample that hits a pole."""
    out = []
    for _ in range(n):
        for _attempt in range(max_retries):
            x = draw(rng)
            try:
                out.append((x, evaluate(x)))
                break
            except PoleError:
                continue
        else:
            raise PoleError("sampler exhausted retries")
    return out


def u_box(ctx, re_max: float | None = None) -> tuple[float, float]:
    """Half-widths of the sampling rectangle in the u-plane."""
    im = min(1.0, abs((ctx.r * ctx.tau).imag) / 4)
    re = 2 * ctx.r if re_max is None else min(re_max, 2 * ctx.r)
    return re, im


def draw_u(rng, ctx, re_max: float | None = None, im_scale: float = 1.0) -> complex:
    re, im = u_box(ctx, re_max)
    return complex(rng.uniform(-re, re), im_scale * rng.uniform(-im, im))
