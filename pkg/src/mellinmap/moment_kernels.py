"""Toy anomalous dimension, its dual, and the matching splitting function.

The toy pair is

    gamma(N) = 1 / (N + 1),      chi(M) = 1 / M - 1,

which are mutual inverses: chi(gamma(N)) = N and gamma(chi(M)) = M.
The splitting function with gamma as its Mellin moment is P(x) = x, since
int_0^1 x^(N-1) * x dx = 1 / (N + 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationError, PoleError

__all__ = [
    "POLE_RADIUS",
    "SAMPLING_POLE_RADIUS",
    "KernelKind",
    "MomentKernel",
    "SplittingKind",
    "SplittingFunction",
    "TOY_GAMMA",
    "TOY_CHI",
    "TOY_SPLITTING",
    "gamma",
    "chi",
    "duality_residuals",
    "mellin_of_splitting",
]

POLE_RADIUS = 1e-12
SAMPLING_POLE_RADIUS = 1e-6


class KernelKind(enum.Enum):
    TOY_GAMMA = "toy_gamma"
    TOY_CHI = "toy_chi"


@dataclass(frozen=True)
class MomentKernel:
    """A moment-space kernel with the positions of its poles."""

    kind: KernelKind
    pole_locations: tuple = ()

    def pole_distance(self, z: complex) -> float:
        return min(abs(complex(z) - p) for p in self.pole_locations)

    def __call__(self, z):
        if self.kind is KernelKind.TOY_GAMMA:
            return gamma(z)
        return chi(z)


TOY_GAMMA = MomentKernel(KernelKind.TOY_GAMMA, (complex(-1.0),))
TOY_CHI = MomentKernel(KernelKind.TOY_CHI, (0j,))


class SplittingKind(enum.Enum):
    TOY_LINEAR = "toy_linear"


@dataclass(frozen=True)
class SplittingFunction:
    """x-space evolution kernel P(x) on (0, 1]."""

    kind: SplittingKind = SplittingKind.TOY_LINEAR

    def __call__(self, x):
        return np.asarray(x, dtype=float) if np.ndim(x) else float(x)


TOY_SPLITTING = SplittingFunction()


def _guard(z: complex, pole: complex, radius: float, name: str) -> None:
    d = abs(z - pole)
    if not d > radius:
        raise PoleError(f"{name} evaluated at {z!r}, distance {d:.3e} from pole {pole!r}", distance=d)


def gamma(N) -> complex:
    """Toy anomalous dimension ``1 / (N + 1)``; raises :class:`PoleError` near ``N = -1``."""
    N = complex(N)
    _guard(N, -1.0 + 0j, POLE_RADIUS, "gamma")
    return 1.0 / (N + 1.0)


def chi(M) -> complex:
    """Dual kernel ``1/M - 1``, the inverse map of :func:`gamma`."""
    M = complex(M)
    _guard(M, 0j, POLE_RADIUS, "chi")
    return 1.0 / M - 1.0


def duality_residuals(samples, radius: float = SAMPLING_POLE_RADIUS):
    """Round-trip errors of the duality map at each sample.

    Each sample is used once as an N value and once as an M value, giving
    ``(|chi(gamma(s)) - s|, |gamma(chi(s)) - s|)``.

    A sample within ``radius`` of either pole (``-1`` or ``0``), or of the
    points mapped onto those poles by the first leg of a round trip, is not
    dropped: its pair is returned as ``(nan, nan)`` and its index appears in
    the second return value.

    Returns
    -------
    residuals : list of tuple of float
    flagged : list of int
    """
    out = []
    flagged = []
    for i, s in enumerate(samples):
        s = complex(s)
        # gamma(s) = 0 never happens; chi(s) = -1 only at s -> inf
        if abs(s + 1.0) <= radius or abs(s) <= radius:
            out.append((math.nan, math.nan))
            flagged.append(i)
            continue
        r1 = abs(chi(gamma(s)) - s)
        r2 = abs(gamma(chi(s)) - s)
        out.append((r1, r2))
    return out, flagged


def mellin_of_splitting(P: SplittingFunction, N, tol: float = 1e-12) -> complex:
    r"""Numerical Mellin moment :math:`\int_0^1 x^{N-1} P(x)\,dx`.

    The substitution ``x = exp(-s)`` turns the endpoint ``x = 0`` into a
    decaying exponential on ``s in [0, inf)``, which removes the algebraic
    endpoint behaviour of ``x^N`` for small ``Re(N)``.

    Parameters
    ----------
    P : SplittingFunction
    N : complex
        Moment index with ``Re(N) > 0``.
    tol : float
        Absolute and relative tolerance handed to the adaptive rule.
    """
    N = complex(N)
    if not N.real > 0.0:
        raise DomainError(f"mellin_of_splitting needs Re(N) > 0, got {N!r}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")

    def integrand(s):
        x = math.exp(-s)
        # dx = x ds, so x^(N-1) dx = x^N ds
        return np.exp(-N * s) * P(x)

    # |integrand| < e^-40 beyond s_max
    decay = N.real + 1.0
    s_max = 40.0 / decay
    oscillations = abs(N.imag) * s_max / (2.0 * math.pi)
    limit = int(min(5000, 200 + 20 * oscillations))
    value, err, info = integrate.quad(
        integrand, 0.0, s_max, epsabs=tol, epsrel=tol, limit=limit,
        complex_func=True, full_output=True,
    )
    err = abs(err.real) + abs(err.imag) if isinstance(err, complex) else err
    if not err <= 10.0 * tol * max(1.0, abs(value)):
        raise IntegrationError(
            f"Mellin moment at N={N!r} did not converge (error {err:.3e})",
            estimate=value, error=err,
        )
    return complex(value)
