"""Numerical verification of an elliptic quantum algebra and its free-field realization."""
from .context import BracketKind, EllipticContext
from .report import CheckReport, PoleError

__version__ = "0.1.0"

__all__ = ["BracketKind", "CheckReport", "EllipticContext", "PoleError", "__version__"]
