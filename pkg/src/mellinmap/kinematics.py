"""Evolution points, per-method reports and the closed-form referee."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import DomainError
from .special_functions import phi_series_signed

__all__ = ["EvolutionPoint", "MethodReport", "closed_form", "oracle_report", "relative_deviation"]


@dataclass(frozen=True)
class EvolutionPoint:
    """Kinematic point ``(x, u)`` with ``u = mu^2 / Lambda^2``.

    ``t = ln u * ln(1/x)`` and ``w = sqrt(ln u / ln(1/x))`` are derived; ``w``
    is ``None`` unless ``x < 1`` and ``u > 1``.
    """

    x: float
    u: float

    def __post_init__(self):
        x, u = float(self.x), float(self.u)
        if not (math.isfinite(x) and 0.0 < x <= 1.0):
            raise DomainError(f"x must lie in (0, 1], got {self.x!r}")
        if not (math.isfinite(u) and u > 0.0):
            raise DomainError(f"u must be positive and finite, got {self.u!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "u", u)

    @property
    def log_u(self) -> float:
        return math.log(self.u)

    @property
    def log_inv_x(self) -> float:
        return -math.log(self.x)

    @property
    def t(self) -> float:
        return self.log_u * self.log_inv_x

    @property
    def w(self) -> Optional[float]:
        if self.x < 1.0 and self.u > 1.0:
            return math.sqrt(self.log_u / self.log_inv_x)
        return None


@dataclass(frozen=True)
class MethodReport:
    """Value of phi(x, u) from one evaluation route."""

    method: str
    value: float
    error_estimate: float
    nodes_or_terms: int
    deviation_from_oracle: float = math.nan

    def against(self, oracle_value: float) -> "MethodReport":
        return replace(self, deviation_from_oracle=relative_deviation(self.value, oracle_value))


def relative_deviation(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def closed_form(p: EvolutionPoint, tol: float = 1e-15) -> float:
    """``x * I0(2 sqrt(t))``, continued to ``t < 0`` through the signed series."""
    if p.x == 1.0:
        return 1.0
    return p.x * phi_series_signed(p.t, tol).value


def oracle_report(p: EvolutionPoint, tol: float = 1e-15) -> MethodReport:
    if p.x == 1.0:
        return MethodReport("oracle", 1.0, 0.0, 1, 0.0)
    s = phi_series_signed(p.t, tol)
    return MethodReport("oracle", p.x * s.value, p.x * s.truncation_estimate, s.terms_used, 0.0)
