r"""Inverse Mellin quadrature for the toy solution.

Two routes to

.. math::
    \phi(x, u) = \frac{1}{2\pi i}\int_{c-i\infty}^{c+i\infty}
        \frac{x^{-N}}{N+1}\, u^{1/(N+1)}\, dN

are provided.

``invert_direct`` applies the trapezoid rule on the vertical line
``Re N = c``.  The integrand only decays like ``1/|N|`` (``1/|N|^2`` once the
residue at ``N = -1`` is subtracted), so the truncated tails beyond ``|Im N| = T``
are added back in closed form through generalized exponential integrals, and
the trapezoid endpoint error is removed with the first Euler-Maclaurin term.

``invert_mapped`` uses the change of variables

.. math::
    N(M) = \frac{Mw - 1 + \sqrt{(Mw + 1)^2 - 4w^2}}{2},

under which the exponent ``-N ln x + ln u / (N+1)`` becomes ``M sqrt(t)`` and
``dN / (N+1)`` becomes ``dM / sqrt((M + 1/w)^2 - 4)``.  After shifting and
rescaling, the loop around the branch cut collapses onto ``[-1, 1]`` and is
integrated exactly by Chebyshev-Gauss quadrature.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .kinematics import EvolutionPoint, MethodReport

__all__ = [
    "ContourKind",
    "Contour",
    "DEFAULT_ANCHOR",
    "DEFAULT_EXTENT",
    "DEFAULT_NODES",
    "DEFAULT_CHEB_NODES",
    "build_vertical_contour",
    "build_chebyshev_contour",
    "invert_direct",
    "invert_mapped",
    "mellin_map",
    "map_jacobian",
    "mapped_loop_integral",
    "expint_n",
]

DEFAULT_ANCHOR = 0.5
DEFAULT_EXTENT = 200.0
DEFAULT_NODES = 4096
DEFAULT_CHEB_NODES = 64

_EPS = np.finfo(float).eps
_EULER_GAMMA = 0.5772156649015329


class ContourKind(enum.Enum):
    VERTICAL_LINE = "vertical_line"
    CHEBYSHEV_CUT = "chebyshev_cut"


@dataclass(frozen=True, eq=False)
class Contour:
    """Quadrature nodes and weights along a path in the complex plane.

    The inverse-Mellin normalization ``1/(2 pi i)`` is already folded into
    ``weights``, so an integral is ``sum(weights * f(nodes))``.
    """

    kind: ContourKind
    anchor: float
    half_extent: float
    node_count: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def step(self) -> float:
        if self.kind is not ContourKind.VERTICAL_LINE:
            raise ContractError("step is only defined for vertical contours")
        return 2.0 * self.half_extent / (self.node_count - 1)


def build_vertical_contour(c: float = DEFAULT_ANCHOR, T: float = DEFAULT_EXTENT, n: int = DEFAULT_NODES) -> Contour:
    """Trapezoid rule on ``N = c + i y``, ``y`` uniform on ``[-T, T]``."""
    c = float(c)
    T = float(T)
    if not (math.isfinite(c) and c > -1.0):
        raise DomainError(f"contour anchor must satisfy c > -1, got {c!r}")
    if not (math.isfinite(T) and T > 0.0):
        raise DomainError(f"contour half extent must be positive, got {T!r}")
    if int(n) != n or n < 2:
        raise DomainError(f"contour needs at least 2 nodes, got {n!r}")
    n = int(n)
    y = np.linspace(-T, T, n)
    h = 2.0 * T / (n - 1)
    # dN = i dy and 1/(2 pi i) cancel to dy / (2 pi)
    weights = np.full(n, h / (2.0 * math.pi), dtype=complex)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return Contour(ContourKind.VERTICAL_LINE, c, T, n, c + 1j * y, weights)


def build_chebyshev_contour(n: int = DEFAULT_CHEB_NODES) -> Contour:
    """Chebyshev-Gauss nodes on the cut ``(-1, 1)`` with weights ``1/n``.

    ``sum(weights * f(nodes))`` approximates ``(1/pi) int f(s) / sqrt(1 - s^2) ds``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"Chebyshev rule needs n >= 1, got {n!r}")
    n = int(n)
    j = np.arange(1, n + 1)
    s = np.cos((2 * j - 1) * math.pi / (2 * n))
    return Contour(ContourKind.CHEBYSHEV_CUT, 0.0, 1.0, n, s.astype(complex), np.full(n, 1.0 / n, dtype=complex))


# -- generalized exponential integral ----------------------------------------

def expint_n(n: int, z: complex, max_iter: int = 10000) -> complex:
    r"""Generalized exponential integral :math:`E_n(z)` for integer ``n >= 1``.

    Power series for small ``|z|`` and next to the negative real axis (where
    the terms do not cancel), continued fraction elsewhere.  Principal branch,
    cut along the negative real axis.
    """
    z = complex(z)
    if n < 1:
        raise DomainError(f"expint_n needs n >= 1, got {n!r}")
    if z == 0:
        if n == 1:
            raise DomainError("E_1(0) diverges")
        return complex(1.0 / (n - 1))
    # sum |terms| ~ e^{|z|} against |E_n| ~ e^{-Re z} / |z|
    use_series = abs(z) <= 1.0 or (abs(z) + z.real < 4.0 and abs(z) < 700.0)
    if not use_series:
        # modified Lentz
        tiny = 1e-300
        b = z + n
        c = 1.0 / tiny
        d = 1.0 / b
        h = d
        for i in range(1, max_iter):
            an = -i * (n - 1 + i)
            b += 2.0
            d = 1.0 / (an * d + b)
            c = b + an / c
            delta = c * d
            h *= delta
            if abs(delta - 1.0) < 2.0 * _EPS:
                return h * cmath.exp(-z)
        raise ArithmeticError(f"E_{n}({z!r}) continued fraction did not converge")
    total = complex(1.0 / (n - 1)) if n != 1 else -cmath.log(z) - _EULER_GAMMA
    fact = 1.0 + 0j
    for i in range(1, max_iter):
        fact *= -z / i
        if i != n - 1:
            delta = -fact / (i - n + 1)
        else:
            psi = -_EULER_GAMMA + sum(1.0 / k for k in range(1, n))
            delta = fact * (-cmath.log(z) + psi)
        total += delta
        if abs(delta) < abs(total) * _EPS:
            return total
    raise ArithmeticError(f"E_{n}({z!r}) series did not converge")


def _ray_integral(m: int, a: float, s0: complex) -> complex:
    # int_{s0}^{s0 + i inf} e^{a s} s^{-m} ds = s0^{1-m} E_m(-a s0)
    # (conditionally convergent for m = 1)
    return s0 ** (1 - m) * expint_n(m, -a * s0)


def _tail_correction(a: float, L: float, x: float, c: float, T: float, first_k: int):
    """Closed-form contribution of ``|Im N| > T``.

    Uses ``(e^{L/s} - 1)/s = sum_{k>=1} L^k / (k! s^{k+1})`` with ``s = N + 1``
    (``k = 0`` is included for the unsubtracted integrand).  The two rays are
    complex conjugates, so only the upper one is evaluated.
    Returns the correction and the magnitude of the last term kept.
    """
    s0 = complex(1.0 + c, T)
    total = 0.0
    coeff = 1.0
    last = 0.0
    for k in range(first_k, 200):
        if k > 0:
            coeff = L**k / math.factorial(k)
        U = _ray_integral(k + 1, a, s0)
        term = x * coeff * U.imag / math.pi
        total += term
        last = abs(term)
        if k > first_k and last < 1e-18 * max(1.0, abs(total)):
            break
    return total, last


def _integrand(N, a: float, L: float, subtract_leading: bool):
    s = N + 1.0
    if subtract_leading:
        return np.exp(a * N) * np.expm1(L / s) / s
    return np.exp(a * N) * np.exp(L / s) / s


def _integrand_derivative(N, a: float, L: float, subtract_leading: bool):
    s = N + 1.0
    e = np.exp(L / s)
    ek = np.expm1(L / s) if subtract_leading else e
    core = ek / s
    dcore = -L * e / s**3 - ek / s**2
    return np.exp(a * N) * (a * core + dcore)


def _direct_sum(p: EvolutionPoint, contour: Contour, subtract_leading: bool, tail_correction: bool):
    a = p.log_inv_x
    L = p.log_u
    g = _integrand(contour.nodes, a, L, subtract_leading)
    terms = contour.weights * g
    value = complex(np.sum(terms))
    # phase of exp(a N) loses about eps * a * |Im N|
    roundoff = float(np.sum(np.abs(terms))) * _EPS * (4.0 + a * contour.half_extent)
    last_tail = 0.0
    if tail_correction and L != 0.0:
        c, T = contour.anchor, contour.half_extent
        h = contour.step
        # Euler-Maclaurin: int = trapezoid - h^2/12 (f'(T) - f'(-T)), f(y) = g(c + i y)
        fp_hi = 1j * _integrand_derivative(complex(c, T), a, L, subtract_leading)
        fp_lo = 1j * _integrand_derivative(complex(c, -T), a, L, subtract_leading)
        endpoint = h * h / 12.0 * (fp_hi - fp_lo) / (2.0 * math.pi)
        value -= endpoint
        tail, last_tail = _tail_correction(a, L, p.x, c, T, first_k=1 if subtract_leading else 0)
        value += tail
        # next Euler-Maclaurin term, h^4/720 f''', with f''' ~ a^2 f'
        last_tail += abs(endpoint) * (a * h) ** 2 / 60.0
    base = p.x if subtract_leading else 0.0
    return base + value.real, roundoff + last_tail


def invert_direct(
    p: EvolutionPoint,
    contour: Contour | None = None,
    subtract_leading: bool = True,
    tail_correction: bool = True,
) -> MethodReport:
    r"""phi(x, u) by trapezoid quadrature along a vertical line.

    Parameters
    ----------
    p : EvolutionPoint
        Needs ``0 < x < 1`` and ``u >= 1``.
    contour : Contour, optional
        A vertical contour; defaults to ``c = 0.5, T = 200, n = 4096``.
    subtract_leading : bool
        Integrate ``x^{-N} (u^{1/(N+1)} - 1)/(N+1)`` and add back its residue
        ``x`` at ``N = -1``.
    tail_correction : bool
        Add the closed-form ``|Im N| > T`` tails and the Euler-Maclaurin
        endpoint term. Without it the result carries an ``O(1/T)`` truncation
        error (``O(1/T^2)`` when subtracting).

    Returns
    -------
    MethodReport
        ``error_estimate`` is ``|R(n) - R(n/2)|`` plus roundoff and tail
        truncation bounds.
    """
    if contour is None:
        contour = build_vertical_contour()
    if not isinstance(contour, Contour) or contour.kind is not ContourKind.VERTICAL_LINE:
        raise ContractError("invert_direct needs a vertical-line contour")
    if not p.x < 1.0:
        raise DomainError("contour routes need x < 1; use the closed form at x = 1")
    if p.u < 1.0:
        raise DomainError(f"invert_direct needs u >= 1, got {p.u!r}")
    value, noise = _direct_sum(p, contour, subtract_leading, tail_correction)
    if contour.node_count >= 4:
        half = build_vertical_contour(contour.anchor, contour.half_extent, contour.node_count // 2)
        coarse, _ = _direct_sum(p, half, subtract_leading, tail_correction)
        estimate = abs(value - coarse) + noise
    else:
        estimate = math.inf
    return MethodReport("direct", value, estimate, contour.node_count)


# -- mapped contour --------------------------------------------------------------

def mellin_map(M, w: float):
    r"""``N(M) = (M w - 1 + sqrt((M w + 1)^2 - 4 w^2)) / 2``.

    The square root is taken as ``(Mw + 1) sqrt(1 - 4w^2/(Mw + 1)^2)``, which is
    analytic off the segment where ``(Mw+1)^2 - 4w^2`` is real and
    non-positive, and tends to ``+ (Mw + 1)`` for large ``|M|``.
    """
    M = np.asarray(M, dtype=complex)
    v = M * w + 1.0
    root = v * np.sqrt(1.0 - 4.0 * w * w / (v * v))
    return (M * w - 1.0 + root) / 2.0


def map_jacobian(M, w: float):
    """``N'(M) / (N(M) + 1) = 1 / sqrt((M + 1/w)^2 - 4)`` on the same sheet."""
    M = np.asarray(M, dtype=complex)
    v = M + 1.0 / w
    return 1.0 / (v * np.sqrt(1.0 - 4.0 / (v * v)))


def mapped_loop_integral(p: EvolutionPoint, n: int = 128, radius: float = 3.0) -> complex:
    r"""phi(x, u) as a closed loop in the mapped plane.

    Evaluates ``x (1/2 pi i) oint e^{V sqrt(t)} / sqrt(V^2 - 4) dV`` on the circle
    ``|V| = radius`` around the cut ``[-2, 2]``, with ``V = M + 1/w``.  The
    trapezoid rule on a circle converges geometrically for this analytic
    integrand.
    """
    if not radius > 2.0:
        raise DomainError("the loop must enclose the cut [-2, 2]")
    theta = 2.0 * math.pi * np.arange(n) / n
    V = radius * np.exp(1j * theta)
    root = V * np.sqrt(1.0 - 4.0 / (V * V))
    # dV = i V dtheta, 1/(2 pi i) -> V / n
    vals = np.exp(V * math.sqrt(p.t)) / root * V / n
    return p.x * complex(np.sum(vals))


def _chebyshev_sum(sqrt_t: float, contour: Contour) -> float:
    return float(np.sum((contour.weights * np.exp(2.0 * sqrt_t * contour.nodes)).real))


def invert_mapped(p: EvolutionPoint, n: int = DEFAULT_CHEB_NODES) -> MethodReport:
    r"""phi(x, u) from the collapsed mapped contour.

    Computes ``x (1/pi) int_{-1}^{1} e^{2 s sqrt(t)} / sqrt(1 - s^2) ds`` with an
    ``n``-point Chebyshev-Gauss rule.
    """
    if int(n) != n or n < 4:
        raise DomainError(f"invert_mapped needs n >= 4, got {n!r}")
    if not p.x < 1.0:
        raise DomainError("contour routes need x < 1; use the closed form at x = 1")
    if not p.u > 1.0:
        raise DomainError(
            f"invert_mapped needs u > 1 (got {p.u!r}); use phi_series_signed for u <= 1"
        )
    n = int(n)
    sqrt_t = math.sqrt(p.t)
    fine = p.x * _chebyshev_sum(sqrt_t, build_chebyshev_contour(n))
    coarse = p.x * _chebyshev_sum(sqrt_t, build_chebyshev_contour(n // 2))
    return MethodReport("mapped", fine, abs(fine - coarse), n)
