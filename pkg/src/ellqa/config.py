"""Run configuration: flat key=value files with '#' comments, overridable by flags."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .context import EllipticContext

SUITES = ("qseries", "structfuncs", "rmatrix", "bosonope", "evalrep", "identities")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    q: float = 0.5
    r: float = 4.0
    c: float = 1.0
    tol: float | None = None  # None keeps each check's own tolerance
    n_samples: int = 50
    series_order: int = 30
    product_cutoff: int | None = None
    seed: int = 0
    suites: tuple[str, ...] = ("all",)

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ConfigError(f"q: must lie in (0, 1), got {self.q}")
        if not self.r > self.c:
            raise ConfigError(f"r: must exceed c={self.c}, got {self.r}")
        if self.c < 0:
            raise ConfigError(f"c: must be >= 0, got {self.c}")
        if self.tol is not None and self.tol <= 0:
            raise ConfigError("tol: must be positive")
        if self.n_samples < 1:
            raise ConfigError("n_samples: must be >= 1")
        if self.series_order < 1:
            raise ConfigError("series_order: must be >= 1")
        bad = [s for s in self.suites if s != "all" and s not in SUITES]
        if bad:
            raise ConfigError(f"suites: unknown {bad}; choose from {('all',) + SUITES}")
        # surfaces cutoff range errors before any run
        self.context()

    @property
    def selected(self) -> tuple[str, ...]:
        return SUITES if "all" in self.suites else tuple(s for s in SUITES if s in self.suites)

    def context(self, **changes) -> EllipticContext:
        ctx = EllipticContext(q=self.q, r=self.r, c=self.c, product_cutoff=self.product_cutoff,
                              series_order=self.series_order)
        return ctx.with_(**changes) if changes else ctx

    def to_dict(self) -> dict:
        d = asdict(self)
        d["suites"] = list(self.suites)
        return d


_TYPES = {f.name: f.type for f in fields(SuiteConfig)}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key not in _TYPES:
        raise ConfigError(f"{key}: unknown key")
    if key == "suites":
        return tuple(s.strip() for s in raw.replace(",", " ").split() if s.strip())
    if raw.lower() in ("none", ""):
        if key in ("tol", "product_cutoff"):
            return None
        raise ConfigError(f"{key}: value required")
    try:
        if key in ("n_samples", "series_order", "product_cutoff", "seed"):
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc


def parse_config_text(text: str, source: str = "<config>") -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            out[key] = _coerce(key, val)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    return out


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> SuiteConfig:
    """File values first, then non-None overrides (flags win)."""
    values = {}
    if path is not None:
        p = Path(path)
        values.update(parse_config_text(p.read_text(), str(p)))
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        values[k] = _coerce(k, v) if isinstance(v, str) else v
    if "suites" in values and isinstance(values["suites"], list):
        values["suites"] = tuple(values["suites"])
    return SuiteConfig(**values)
