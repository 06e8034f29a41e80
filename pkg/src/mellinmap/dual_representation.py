"""The dual route: phi(x, u) as a loop integral in the M = gamma(N) plane.

Substituting ``N = chi(M) = 1/M - 1`` sends the vertical Mellin contour to a
closed loop around ``M = 0`` and gives

    phi(x, u) = -(1/2 pi i) oint x^{-chi(M)} u^M dM / M
              = x sum_k (ln(1/x))^k / k! * Res_{M=0} u^M / M^{k+1}.

The residue of ``u^M / M^{k+1}`` is ``(ln u)^k / k!``.  The module also checks
the two first-order equations solved by the power laws ``u^{gamma(N)}`` and
``x^{-chi(M)}`` with central differences in the logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError
from .kinematics import EvolutionPoint, MethodReport
from .moment_kernels import chi, gamma

__all__ = [
    "DualSeriesConfig",
    "residue_power_moment",
    "residue_by_quadrature",
    "eval_dual",
    "dual_ode_residual",
    "moment_ode_residual",
    "DEFAULT_FD_STEP",
]

DEFAULT_FD_STEP = 1e-3


@dataclass(frozen=True)
class DualSeriesConfig:
    tol: float = 1e-14
    max_terms: int = 500

    def __post_init__(self):
        if not self.tol > 0.0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")


def residue_power_moment(k: int, u: float) -> float:
    """Residue of ``u^M / M^(k+1)`` at ``M = 0``, i.e. ``(ln u)^k / k!``."""
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    if not u > 0.0:
        raise DomainError(f"u must be positive, got {u!r}")
    k = int(k)
    # product form keeps large k finite
    value = 1.0
    L = math.log(u)
    for j in range(1, k + 1):
        value *= L / j
    return value


def residue_by_quadrature(k: int, u: float, n: int = 256, radius: float = 1.0) -> complex:
    """``(1/2 pi i) oint u^M / M^(k+1) dM`` on ``|M| = radius`` by the trapezoid rule."""
    theta = 2.0 * math.pi * np.arange(n) / n
    M = radius * np.exp(1j * theta)
    # dM = i M dtheta
    return complex(np.mean(np.exp(M * math.log(u)) / M ** (k + 1) * M))


def eval_dual(p: EvolutionPoint, cfg: DualSeriesConfig | None = None) -> MethodReport:
    """phi(x, u) summed term by term from residues of the dual loop integral.

    Term ``k`` is ``(ln(1/x))^k / k!`` times :func:`residue_power_moment`.
    Summation stops when a term falls below ``cfg.tol`` relative to the
    partial sum, and the sequence is past its peak.
    """
    cfg = cfg or DualSeriesConfig()
    a = p.log_inv_x
    L = p.log_u
    t_abs = abs(a * L)
    total = 1.0
    x_factor = 1.0
    for k in range(1, cfg.max_terms + 1):
        x_factor *= a / k
        term = x_factor * residue_power_moment(k, p.u)
        if k * k > t_abs and abs(term) < cfg.tol * max(1.0, abs(total)):
            return MethodReport("dual", p.x * total, p.x * abs(term), k)
        total += term
    raise TruncationError(
        f"dual series at x={p.x}, u={p.u} did not converge in {cfg.max_terms} terms",
        partial_sum=p.x * total,
        terms_used=cfg.max_terms,
    )


def _log_grid_residual(log_points: np.ndarray, exponent: complex, h: float, sign: float) -> float:
    # phi = exp(sign * exponent * y); y d/dy phi = sign * exponent * phi
    phi = lambda y: np.exp(sign * exponent * y)
    center = phi(log_points)
    deriv = (phi(log_points + h) - phi(log_points - h)) / (2.0 * h)
    return float(np.max(np.abs(deriv - sign * exponent * center) / np.abs(center)))


def _check_grid(grid, name: str, lower: float, strict: bool) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 3:
        raise DomainError(f"{name} needs at least 3 points")
    if strict and not np.all(np.diff(g) > 0):
        raise DomainError(f"{name} must be strictly increasing")
    if np.any(g <= lower) if strict else np.any(g < lower):
        raise DomainError(f"{name} has points outside its domain")
    return g


def dual_ode_residual(M, x_grid, h: float = DEFAULT_FD_STEP) -> float:
    r"""Residual of ``x d/dx phi = -chi(M) phi`` for ``phi = x^{-chi(M)}``.

    Central differences of step ``h`` in ``ln x``, evaluated at the interior
    grid points; returns ``max |x phi' + chi(M) phi| / |phi|``.
    """
    c = chi(M)
    g = _check_grid(x_grid, "x_grid", 0.0, strict=True)
    if np.any(g >= 1.0):
        raise DomainError("x_grid must lie in (0, 1)")
    if not h > 0.0:
        raise DomainError(f"step must be positive, got {h!r}")
    return _log_grid_residual(np.log(g[1:-1]), c, h, -1.0)


def moment_ode_residual(N, u_grid, h: float = DEFAULT_FD_STEP) -> float:
    r"""Residual of ``u d/du phi = gamma(N) phi`` for ``phi = u^{gamma(N)}``."""
    gN = gamma(N)
    g = _check_grid(u_grid, "u_grid", 1.0, strict=False)
    if not h > 0.0:
        raise DomainError(f"step must be positive, got {h!r}")
    return _log_grid_residual(np.log(g[1:-1]), gN, h, 1.0)
