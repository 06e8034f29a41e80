import math

import numpy as np
import pytest

from conftest import GRID_U, GRID_X
from mellinmap.dual_representation import (
    DualSeriesConfig,
    dual_ode_residual,
    eval_dual,
    moment_ode_residual,
    residue_by_quadrature,
    residue_power_moment,
)
from mellinmap.errors import DomainError, PoleError, TruncationError
from mellinmap.kinematics import EvolutionPoint, closed_form, relative_deviation
from mellinmap.special_functions import phi_series_signed

X_GRID = np.geomspace(1e-3, 0.99, 100)
U_GRID = np.geomspace(1.0, 100.0, 100)


def test_residue_values():
    assert residue_power_moment(0, 7.0) == 1.0
    assert residue_power_moment(1, math.e) == pytest.approx(1.0, abs=1e-16)
    assert residue_power_moment(3, 10.0) == pytest.approx(2.0346785922934761968, rel=1e-15)
    assert residue_power_moment(4, 1.0) == 0.0


@pytest.mark.parametrize("u", [2.0, 10.0, 100.0])
@pytest.mark.parametrize("k", range(11))
def test_residue_matches_circle_quadrature(k, u):
    ref = residue_by_quadrature(k, u, n=256, radius=1.0)
    assert abs(ref.imag) <= 1e-10
    assert abs(residue_power_moment(k, u) - ref.real) <= 1e-10


@pytest.mark.parametrize("k, u", [(-1, 2.0), (1.5, 2.0), (2, 0.0)])
def test_residue_domain(k, u):
    with pytest.raises(DomainError):
        residue_power_moment(k, u)


def test_dual_grid_matches_series_and_oracle():
    for x in GRID_X:
        for u in GRID_U:
            p = EvolutionPoint(x, u)
            rep = eval_dual(p)
            series = x * phi_series_signed(p.t).value
            assert abs(rep.value - series) <= 1e-14 * (1 + abs(rep.value))
            assert relative_deviation(rep.value, closed_form(p)) <= 1e-12


def test_dual_boundaries_and_negative_t():
    assert eval_dual(EvolutionPoint(0.3, 1.0)).value == 0.3
    assert eval_dual(EvolutionPoint(1.0, 50.0)).value == 1.0
    p = EvolutionPoint(0.2, 0.5)
    assert abs(eval_dual(p).value - 0.2 * phi_series_signed(p.t).value) <= 1e-15


def test_dual_truncation_error():
    with pytest.raises(TruncationError) as err:
        eval_dual(EvolutionPoint(0.01, 100.0), DualSeriesConfig(max_terms=3))
    assert err.value.terms_used == 3


def test_dual_config_validation():
    with pytest.raises(DomainError):
        DualSeriesConfig(tol=0.0)
    with pytest.raises(DomainError):
        DualSeriesConfig(max_terms=0)


def test_dual_ode_examples():
    assert dual_ode_residual(1.0, X_GRID) == 0.0
    h = 1e-3
    # phi = 1/x: the central-difference error is sinh(h)/h - 1 ~ h^2/6
    assert dual_ode_residual(0.5, X_GRID, h) <= h * h
    # central differences of e^{c y} carry the relative error |c|^3 h^2 / 6;
    # |chi(0.3+0.2i)| ~ 2.02 puts this point at 1.37e-6, above 1e-6
    c = abs(1 / (0.3 + 0.2j) - 1)
    r = dual_ode_residual(0.3 + 0.2j, X_GRID, h)
    assert r == pytest.approx(c ** 3 * h * h / 6, rel=1e-3)


def test_moment_ode_examples():
    assert moment_ode_residual(1e9, U_GRID) <= 1e-12
    h = 1e-3
    assert moment_ode_residual(0.0, U_GRID, h) <= h * h
    assert moment_ode_residual(2 + 1j, U_GRID, h) <= 1e-6


@pytest.mark.parametrize("fn, arg, grid", [
    (dual_ode_residual, 0.3 + 0.2j, X_GRID),
    (dual_ode_residual, 0.5, X_GRID),
    (moment_ode_residual, 2 + 1j, U_GRID),
    (moment_ode_residual, 0.0, U_GRID),
])
def test_ode_residual_second_order(fn, arg, grid):
    ratio = fn(arg, grid, 1e-3) / fn(arg, grid, 5e-4)
    assert abs(ratio - 4) <= 0.8


def test_ode_poles_and_grids():
    with pytest.raises(PoleError):
        dual_ode_residual(0.0, X_GRID)
    with pytest.raises(PoleError):
        moment_ode_residual(-1.0, U_GRID)
    with pytest.raises(DomainError):
        dual_ode_residual(0.5, [0.1, 0.2])
    with pytest.raises(DomainError):
        dual_ode_residual(0.5, [0.3, 0.2, 0.4])
    with pytest.raises(DomainError):
        dual_ode_residual(0.5, [0.3, 0.5, 1.0])
    with pytest.raises(DomainError):
        moment_ode_residual(0.5, [0.5, 2.0, 3.0])
