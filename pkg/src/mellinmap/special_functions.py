r"""Closed-form oracles: the power series behind :math:`I_0` and the Lambert W function.

Every contour route in the package is checked against

.. math::
    \phi(x, u) = x \sum_{k \ge 0} \frac{t^k}{(k!)^2} = x\, I_0\!\left(2\sqrt{t}\right),
    \qquad t = \ln u \,\ln(1/x),

so the series here is written out by hand rather than taken from a library.
The Lambert W function is solved by Halley iteration on :math:`w e^w = z`
on branches -1, 0 and +1.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError, IterationError, TruncationError

__all__ = [
    "SeriesResult",
    "LambertBranch",
    "MAX_SERIES_TERMS",
    "bessel_i0",
    "phi_series_signed",
    "lambert_w",
    "lambert_residual",
]

MAX_SERIES_TERMS = 500

# 1/e split into a double plus its rounding remainder, so z + 1/e keeps
# its leading digits when z sits next to the branch point.
_INV_E_HI = 0.36787944117144233
_INV_E_LO = -1.2428753672788363e-17
# arguments this close to -1/e are treated as the branch point itself
_BRANCH_SNAP = 4.0 * 2.220446049250313e-16
# inside this radius the square-root expansion replaces iteration
_BRANCH_SERIES_RADIUS = 1e-4
# coefficients of W = sum_k c_k p^k, p = sqrt(2 (e z + 1))
_BRANCH_COEFFS = (
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680863.0 / 43545600.0,
    -1963.0 / 204120.0,
    226287557.0 / 37623398400.0,
)
_MAX_HALLEY_ITER = 64


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated power series.

    ``truncation_estimate`` is the magnitude of the first omitted term.
    """

    value: float
    terms_used: int
    truncation_estimate: float


class LambertBranch(enum.IntEnum):
    """Branch index of the Lambert W function (standard indexing)."""

    LOWER = -1
    PRINCIPAL = 0
    UPPER = 1

    @classmethod
    def coerce(cls, branch) -> "LambertBranch":
        try:
            return cls(int(branch))
        except (ValueError, TypeError):
            raise DomainError(f"Lambert branch must be -1, 0 or +1, got {branch!r}") from None


def _power_series(t: float, tol: float) -> SeriesResult:
    # sum_k t^k / (k!)^2, term_{k+1} = term_k * t / (k+1)^2
    total = 1.0
    term = 1.0
    for k in range(MAX_SERIES_TERMS):
        nxt = term * t / ((k + 1) * (k + 1))
        # the tail bound needs monotonically shrinking terms
        decreasing = (k + 1) * (k + 1) > abs(t)
        if decreasing and abs(nxt) < tol * max(1.0, abs(total)):
            return SeriesResult(total, k + 1, abs(nxt))
        total += nxt
        term = nxt
    raise TruncationError(
        f"series in t={t!r} did not converge in {MAX_SERIES_TERMS} terms",
        partial_sum=total,
        terms_used=MAX_SERIES_TERMS,
    )


def bessel_i0(z: float, tol: float = 1e-15) -> SeriesResult:
    """Modified Bessel function :math:`I_0(z)` from its power series.

    Parameters
    ----------
    z : float
        Non-negative argument.
    tol : float
        Summation stops once the next term is below ``tol`` times the
        partial sum.

    Returns
    -------
    SeriesResult
    """
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"bessel_i0 needs a finite argument, got {z!r}")
    if z < 0.0:
        raise DomainError(f"bessel_i0 is defined here for z >= 0, got {z!r}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    half = 0.5 * z
    return _power_series(half * half, tol)


def phi_series_signed(t: float, tol: float = 1e-15) -> SeriesResult:
    r"""Sum :math:`\sum_k t^k/(k!)^2` for either sign of ``t``.

    For ``t >= 0`` this is :math:`I_0(2\sqrt{t})`; for ``t < 0`` it is
    :math:`J_0(2\sqrt{-t})` and the alternating-series bound is used.
    """
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"phi_series_signed needs a finite t, got {t!r}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    return _power_series(t, tol)


def _branch_offset(z: complex) -> complex:
    """Return ``e*z + 1`` with extra care for the 1/e cancellation."""
    return math.e * ((z + _INV_E_HI) + _INV_E_LO)


def _on_branch_point_sheet(k: int, z: complex) -> bool:
    # sheets that meet at -1/e: branch 0 always, branch -1 from above the
    # cut, branch +1 from below
    if k == 0:
        return True
    if k == -1:
        return z.imag >= 0.0
    return z.imag < 0.0


def _branch_point_series(k: int, z: complex, order: int) -> complex:
    p = cmath.sqrt(2.0 * _branch_offset(z))
    if k != 0:
        p = -p
    w = 0j
    for c in reversed(_BRANCH_COEFFS[: order + 1]):
        w = w * p + c
    return w


def _initial_guess(k: int, z: complex) -> complex:
    if abs(z + 1.0 / math.e) < 0.3 and _on_branch_point_sheet(k, z):
        return _branch_point_series(k, z, 3)
    if k == 0:
        if abs(z) < 1.5 and abs(1.0 + z) > 0.5:
            return cmath.log(1.0 + z)
        L1 = cmath.log(z)
        return L1 - cmath.log(L1)
    L1 = cmath.log(z) + 2j * math.pi * k
    return L1 - cmath.log(L1)


def _halley(w, z, max_iter):
    for _ in range(max_iter):
        ew = cmath.exp(w) if isinstance(w, complex) else math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w = w - dw
        if abs(dw) <= 4.0 * 2.220446049250313e-16 * (1.0 + abs(w)):
            break
    return w


def lambert_residual(w: complex, z: complex) -> float:
    """Return ``|w e^w - z|``."""
    return abs(w * cmath.exp(w) - z)


def lambert_w(branch, z, tol: float = 1e-14) -> complex:
    """Lambert W function on branch -1, 0 or +1.

    Solves ``w * exp(w) = z`` on the requested branch and returns ``w`` as a
    complex number. Branch -1 is real on ``[-1/e, 0)``, branch 0 is real on
    ``[-1/e, inf)``.

    Parameters
    ----------
    branch : LambertBranch or int
        One of -1, 0, +1.
    z : complex
        Argument. Zero is only allowed on the principal branch.
    tol : float
        Residual target: ``|w e^w - z| <= tol * (1 + |z|)``.

    Raises
    ------
    DomainError
        Invalid branch, non-finite ``z`` or ``z == 0`` off the principal branch.
    IterationError
        Halley iteration missed the residual target; carries the last residual.
    """
    k = int(LambertBranch.coerce(branch))
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"lambert_w needs a finite argument, got {z!r}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if z == 0:
        if k == 0:
            return 0j
        raise DomainError(f"W_{k}(0) is not defined (logarithmic singularity)")

    target = tol * (1.0 + abs(z))
    near = abs(_branch_offset(z)) / math.e
    if _on_branch_point_sheet(k, z):
        if near <= _BRANCH_SNAP:
            return complex(-1.0, 0.0)
        if near < _BRANCH_SERIES_RADIUS:
            w = _branch_point_series(k, z, len(_BRANCH_COEFFS) - 1)
            if z.imag == 0.0 and _branch_offset(z).real >= 0.0:
                w = complex(w.real, 0.0)
            return w

    real_line = z.imag == 0.0 and (
        (k == 0 and z.real >= -1.0 / math.e) or (k == -1 and -1.0 / math.e <= z.real < 0.0)
    )
    if real_line:
        x = z.real
        if k == 0:
            w0 = math.log1p(x) if x < 1.5 else math.log(x) - math.log(math.log(x))
            if abs(x + 1.0 / math.e) < 0.3:
                w0 = _branch_point_series(0, z, 3).real
        else:
            if abs(x + 1.0 / math.e) < 0.3:
                w0 = _branch_point_series(-1, z, 3).real
            else:
                L1 = math.log(-x)
                w0 = L1 - math.log(-L1)
        w = complex(_halley(w0, x, _MAX_HALLEY_ITER), 0.0)
    else:
        w = _halley(_initial_guess(k, z), z, _MAX_HALLEY_ITER)

    res = lambert_residual(w, z)
    if not res <= target:
        raise IterationError(
            f"Lambert W branch {k} at z={z!r}: residual {res:.3e} above {target:.3e}",
            residual=res,
        )
    return w
