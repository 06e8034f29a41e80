"""Moment-space evolution and the x-space DGLAP residual.

In moment space the evolution equation is scalar and separable,

    u d/du f(N, u) = a(ln u) gamma(N) f(N, u),

so ``f(N, u1) = f(N, u0) exp(gamma(N) int_{ln u0}^{ln u1} a(s) ds)``.  With the
coupling weight absorbed into the kernel (``a == 1``) the exponent is just
``gamma(N) ln(u1/u0)``.

In x space the same equation reads

    u d/du f(x, u) = int_x^1 dy/y f(y, u) P(x/y),

which ``dglap_residual_xspace`` checks for the closed-form solution with
``P(z) = z``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

from scipy import integrate

from .errors import DomainError, IntegrationError
from .kinematics import EvolutionPoint, closed_form
from .moment_kernels import TOY_SPLITTING, gamma

__all__ = [
    "FIXED_ABSORBED",
    "EvolutionSpec",
    "evolve_moment",
    "initial_moment",
    "dglap_residual_xspace",
]

# sentinel for the toy convention: alpha / 2 pi absorbed into gamma
FIXED_ABSORBED = None


@dataclass(frozen=True)
class EvolutionSpec:
    """Moment ``N`` evolved from ``u_start`` to ``u_end``.

    ``coupling`` is ``None`` for the absorbed fixed coupling, or a callable of
    ``s = ln u`` returning a real weight.
    """

    N: complex
    u_start: float
    u_end: float
    coupling: Optional[Callable[[float], float]] = FIXED_ABSORBED

    def __post_init__(self):
        if not (1.0 <= self.u_start <= self.u_end):
            raise DomainError(
                f"need 1 <= u_start <= u_end, got u_start={self.u_start!r}, u_end={self.u_end!r}"
            )
        gamma(self.N)  # raises PoleError next to N = -1


def initial_moment(N) -> complex:
    """Moment of the initial condition ``phi(x, 1) = x``: ``1 / (N + 1)``."""
    return gamma(N)


def evolve_moment(spec: EvolutionSpec, f_start, tol: float = 1e-12) -> complex:
    """Evolve a single Mellin moment from ``spec.u_start`` to ``spec.u_end``."""
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    g = gamma(spec.N)
    lo, hi = math.log(spec.u_start), math.log(spec.u_end)
    if spec.coupling is FIXED_ABSORBED:
        exponent = hi - lo
    elif hi == lo:
        exponent = 0.0
    else:
        exponent, err = integrate.quad(spec.coupling, lo, hi, epsabs=tol, epsrel=tol, limit=200)
        if not err <= 10.0 * tol * max(1.0, abs(exponent)):
            raise IntegrationError(
                f"coupling integral over [{lo}, {hi}] did not converge", estimate=exponent, error=err
            )
    return complex(f_start) * cmath.exp(g * exponent)


def dglap_residual_xspace(x: float, u: float, h: float = 1e-3, qtol: float = 1e-10) -> float:
    r"""Relative mismatch of the x-space evolution equation for the closed form.

    LHS is the central difference of ``phi(x, u e^{\pm h})`` in ``ln u``; RHS is
    ``int_x^1 dy/y phi(y, u) (x/y)`` by adaptive quadrature.

    Returns
    -------
    float
        ``|LHS - RHS| / (|RHS| + 1e-300)``.
    """
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    if not u > 1.0:
        raise DomainError(f"u must exceed 1, got {u!r}")
    if not h > 0.0 or u * math.exp(-h) <= 1.0:
        raise DomainError(f"step h={h!r} must be positive and keep u e^-h above 1")
    if not qtol > 0.0:
        raise DomainError(f"qtol must be positive, got {qtol!r}")

    up = closed_form(EvolutionPoint(x, u * math.exp(h)))
    down = closed_form(EvolutionPoint(x, u * math.exp(-h)))
    lhs = (up - down) / (2.0 * h)

    def integrand(y):
        return closed_form(EvolutionPoint(y, u)) * TOY_SPLITTING(x / y) / y

    rhs, err = integrate.quad(integrand, x, 1.0, epsabs=qtol * 1e-3, epsrel=qtol, limit=200)
    if not err <= 10.0 * qtol * max(1.0, abs(rhs)):
        raise IntegrationError(f"convolution at x={x}, u={u} did not converge", estimate=rhs, error=err)
    return abs(lhs - rhs) / (abs(rhs) + 1e-300)
