"""All-orders running coupling of N=1 super Yang-Mills through Lambert W.

    alpha(Q^2/mu^2) = -(2 pi / N_c) / W_k(-(Q^2/mu^2)^(-3/2))

``N_c`` is the rank of the gauge group SU(N_c).  On branch ``k = -1`` and for
``Q^2/mu^2 > e^(2/3)`` the Lambert argument lies in ``(-1/e, 0)``, ``W <= -1``
and the coupling is real, positive and falls to zero as ``Q^2 -> inf``.  The
other branches, and branch -1 below ``e^(2/3)``, give complex values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .special_functions import LambertBranch, lambert_residual, lambert_w

__all__ = ["CouplingModel", "CouplingPoint", "alpha", "alpha_point", "BRANCH_POINT_RATIO"]

# Q^2/mu^2 at which the Lambert argument hits -1/e
BRANCH_POINT_RATIO = math.exp(2.0 / 3.0)


@dataclass(frozen=True)
class CouplingModel:
    gauge_N: int = 3
    branch: LambertBranch = LambertBranch.LOWER

    def __post_init__(self):
        if int(self.gauge_N) != self.gauge_N or self.gauge_N < 2:
            raise DomainError(f"gauge_N must be an integer >= 2, got {self.gauge_N!r}")
        object.__setattr__(self, "branch", LambertBranch.coerce(self.branch))


@dataclass(frozen=True)
class CouplingPoint:
    q2_ratio: float
    alpha: complex
    lambert_value: complex
    lambert_residual: float


def _argument(q2_ratio: float) -> float:
    if not (math.isfinite(q2_ratio) and q2_ratio > 0.0):
        raise DomainError(f"q2_ratio must be positive and finite, got {q2_ratio!r}")
    return -(q2_ratio ** -1.5)


def alpha_point(model: CouplingModel, q2_ratio: float, tol: float = 1e-14) -> CouplingPoint:
    """Coupling at ``Q^2/mu^2 = q2_ratio`` together with the Lambert residual."""
    z = _argument(float(q2_ratio))
    w = lambert_w(model.branch, z, tol)
    a = -(2.0 * math.pi / model.gauge_N) / w
    return CouplingPoint(
        q2_ratio=float(q2_ratio),
        # + 0.0 turns a signed zero into +0.0
        alpha=complex(a.real + 0.0, a.imag + 0.0),
        lambert_value=w,
        lambert_residual=lambert_residual(w, z),
    )


def alpha(model: CouplingModel, q2_ratio: float, tol: float = 1e-14) -> complex:
    """``-(2 pi / gauge_N) / W_branch(-q2_ratio^(-3/2))``."""
    return alpha_point(model, q2_ratio, tol).alpha
