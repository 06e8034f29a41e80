import math

import mpmath
import numpy as np
import pytest

from mellinmap.errors import ContractError, DomainError
from mellinmap.kinematics import EvolutionPoint, closed_form, relative_deviation
from mellinmap.mellin_inversion import (
    ContourKind,
    build_chebyshev_contour,
    build_vertical_contour,
    expint_n,
    invert_direct,
    invert_mapped,
    map_jacobian,
    mapped_loop_integral,
    mellin_map,
)

from conftest import GRID_U, GRID_X

# 40-digit mpmath values of x I0(2 sqrt(ln u ln(1/x)))
PHI_05_4 = 1.1089626745639124248
PHI_01_10 = 1.9180012591673657
PHI_001_100 = 13.336154265628550106


# -- contours ---------------------------------------------------------------

def test_three_node_contour():
    c = build_vertical_contour(0.0, 10.0, 3)
    assert c.kind is ContourKind.VERTICAL_LINE
    assert np.allclose(c.nodes, [-10j, 0, 10j])
    assert c.step == 10.0
    # trapezoid weights dy / 2 pi with halved ends
    assert np.allclose(c.weights, np.array([5, 10, 5]) / (2 * math.pi))


@pytest.mark.parametrize("c, T, n", [(0.5, 200.0, 4096), (-0.9, 3.0, 2), (1.0, 50.0, 17)])
def test_vertical_contour_invariants(c, T, n):
    ct = build_vertical_contour(c, T, n)
    assert len(ct.nodes) == len(ct.weights) == ct.node_count == n
    assert np.all(ct.nodes.real == c)
    assert abs(ct.weights.sum() - 2 * T / (2 * math.pi)) <= 1e-12 * T
    assert np.all(ct.weights.imag == 0)


def test_contour_arrays_read_only():
    ct = build_vertical_contour()
    with pytest.raises(ValueError):
        ct.nodes[0] = 0.0


@pytest.mark.parametrize("args", [(-1.0, 10, 8), (0.0, 0.0, 8), (0.0, 10, 1), (math.nan, 1, 4)])
def test_vertical_contour_rejects(args):
    with pytest.raises(DomainError):
        build_vertical_contour(*args)


def test_chebyshev_contour():
    ct = build_chebyshev_contour(16)
    assert ct.kind is ContourKind.CHEBYSHEV_CUT
    assert np.all(np.abs(ct.nodes.real) < 1) and np.all(ct.nodes.imag == 0)
    assert abs(ct.weights.sum() - 1) <= 1e-15
    with pytest.raises(ContractError):
        ct.step


# -- direct route -----------------------------------------------------------

@pytest.mark.parametrize("x", [0.01, 0.3, 0.9])
def test_direct_u_one_is_residue(x):
    assert abs(invert_direct(EvolutionPoint(x, 1.0)).value - x) <= 1e-10


@pytest.mark.parametrize("x, u, expected", [(0.5, 4.0, PHI_05_4), (0.1, 10.0, PHI_01_10), (0.01, 100.0, PHI_001_100)])
def test_direct_examples(x, u, expected):
    rep = invert_direct(EvolutionPoint(x, u))
    assert rep.method == "direct" and rep.nodes_or_terms == 4096
    assert relative_deviation(rep.value, expected) <= 1e-6
    assert rep.error_estimate >= abs(rep.value - expected)


def test_direct_normalization_near_u_one():
    for u in (1.0 + 1e-9, 1.0 + 1e-6):
        p = EvolutionPoint(0.2, u)
        assert abs(invert_direct(p).value - closed_form(p)) <= 1e-10


def test_subtract_leading_accelerates_on_grid():
    ct = build_vertical_contour()
    for x in GRID_X:
        if x == 1.0:
            continue
        for u in GRID_U:
            p = EvolutionPoint(x, u)
            ref = closed_form(p)
            sub = abs(invert_direct(p, ct, True, False).value - ref)
            raw = abs(invert_direct(p, ct, False, False).value - ref)
            assert sub < raw, (x, u, sub, raw)


def test_tail_correction_helps():
    p = EvolutionPoint(0.05, 50.0)
    ref = closed_form(p)
    with_tail = abs(invert_direct(p).value - ref)
    without = abs(invert_direct(p, tail_correction=False).value - ref)
    assert with_tail < without / 100


@pytest.mark.parametrize("x, u", [(0.01, 100.0), (0.1, 4.0), (0.5, 25.0), (0.9, 2.0), (0.3, 10.0)])
def test_anchor_independence(x, u):
    p = EvolutionPoint(x, u)
    reps = [invert_direct(p, build_vertical_contour(c)) for c in (-0.5, 0.0, 0.5, 1.0)]
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            assert abs(a.value - b.value) <= a.error_estimate + b.error_estimate


def test_direct_contract_and_domain():
    p = EvolutionPoint(0.5, 4.0)
    with pytest.raises(ContractError):
        invert_direct(p, build_chebyshev_contour(8))
    with pytest.raises(DomainError):
        invert_direct(EvolutionPoint(1.0, 4.0))
    with pytest.raises(DomainError):
        invert_direct(EvolutionPoint(0.5, 0.5))


# -- mapped route -----------------------------------------------------------

def test_mapped_examples():
    assert relative_deviation(invert_mapped(EvolutionPoint(0.5, 4.0), 32).value, PHI_05_4) <= 1e-13
    assert relative_deviation(invert_mapped(EvolutionPoint(0.01, 100.0), 64).value, PHI_001_100) <= 1e-13
    assert abs(invert_mapped(EvolutionPoint(0.4, 1.0 + 1e-12)).value - 0.4) <= 1e-12


def test_mapped_agrees_with_direct():
    p = EvolutionPoint(0.5, 4.0)
    assert abs(invert_mapped(p, 32).value - invert_direct(p).value) <= 1e-8
    # the direct route is the looser of the two; the mapped one sits on the oracle
    assert abs(invert_mapped(p, 32).value - PHI_05_4) <= 1e-12 * PHI_05_4


@pytest.mark.parametrize("x, u", [(0.01, 100.0), (0.05, 50.0), (0.2, 10.0), (0.7, 2.0)])
def test_mapped_spectral_convergence(x, u):
    p = EvolutionPoint(x, u)
    assert p.t <= 25
    ref = closed_form(p)
    errs = [relative_deviation(invert_mapped(p, n).value, ref) for n in (4, 8, 16, 32, 64)]
    for prev, nxt in zip(errs, errs[1:]):
        if prev <= 1e-13:
            assert nxt <= 1e-13
        else:
            # at least a factor of 4 per doubling until the floor
            assert nxt <= max(prev / 4, 1e-13)
    assert errs[-1] <= 1e-13


def test_mapped_domain():
    with pytest.raises(DomainError, match="phi_series_signed"):
        invert_mapped(EvolutionPoint(0.5, 1.0))
    with pytest.raises(DomainError):
        invert_mapped(EvolutionPoint(0.5, 4.0), 3)
    with pytest.raises(DomainError):
        invert_mapped(EvolutionPoint(1.0, 4.0))


def test_mapped_error_estimate_bounds_error():
    p = EvolutionPoint(0.01, 100.0)
    rep = invert_mapped(p, 8)
    assert rep.error_estimate >= abs(rep.value - closed_form(p))


# -- map identities ---------------------------------------------------------

@pytest.mark.parametrize("M", [0.3 + 0.1j, 2.0, -0.4 + 1.7j, 5 - 3j])
@pytest.mark.parametrize("x, u", [(0.1, 10.0), (0.5, 4.0), (0.01, 2.0)])
def test_map_turns_exponent_into_linear(M, x, u):
    p = EvolutionPoint(x, u)
    N = complex(mellin_map(M, p.w))
    lhs = p.log_inv_x * N + p.log_u / (N + 1)
    rhs = M * math.sqrt(p.t)
    # with s = N + 1: a s + L/s = sqrt(t) (M + 1/w) and sqrt(t)/w = a
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


@pytest.mark.parametrize("M", [0.3 + 0.1j, 2.0, 5 - 3j])
def test_map_jacobian_finite_difference(M):
    w = 0.7
    h = 1e-5
    dN = (mellin_map(M + h, w) - mellin_map(M - h, w)) / (2 * h)
    expected = dN / (mellin_map(M, w) + 1)
    assert abs(complex(map_jacobian(M, w)) - complex(expected)) <= 1e-8


def test_map_large_M_sheet():
    w = 1.3
    M = 1e4 + 1e3j
    N = complex(mellin_map(M, w))
    assert abs(N / (M * w) - 1) <= 1e-3


@pytest.mark.parametrize("x, u", [(0.01, 100.0), (0.5, 4.0), (0.9, 2.0)])
def test_mapped_loop_integral(x, u):
    p = EvolutionPoint(x, u)
    val = mapped_loop_integral(p)
    assert relative_deviation(val.real, closed_form(p)) <= 1e-12
    assert abs(val.imag) <= 1e-12 * abs(val.real)
    with pytest.raises(DomainError):
        mapped_loop_integral(p, radius=1.5)


# -- exponential integral ---------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 7, 20])
@pytest.mark.parametrize("z", [0.5, 3 + 4j, -2 + 0.1j, 0.2 - 30j, -20 + 200j, -0.7 + 1e-3j, 60.0])
def test_expint_against_mpmath(n, z):
    ref = complex(mpmath.expint(n, mpmath.mpc(z)))
    assert abs(expint_n(n, z) - ref) <= 1e-12 * abs(ref) + 1e-300


def test_expint_domain():
    with pytest.raises(DomainError):
        expint_n(0, 1.0)
