import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szasz_gbs import InvalidParameters, OperatorParams, Point2, Rect, catalog
from szasz_gbs.kernel import Axis
from szasz_gbs.moduli import (
    AnalyticModuli,
    BDerivativeModuli,
    BDiffConstants,
    GridModuli,
    LipschitzSpec,
    b_derivative,
    bound_bdiff,
    bound_gbs,
    bound_lipschitz_gbs,
    bound_partial,
    bound_total,
    mixed_difference,
    mixed_modulus,
    partial_modulus,
    total_modulus,
)
from szasz_gbs.moments import BoundConstants, delta_axis, delta_mn, delta_prime

UNIT = Rect(1, 1)


def test_total_modulus_of_x():
    est = total_modulus(lambda x, y: x, UNIT, 0.1)
    assert est.value == pytest.approx(0.1, rel=1e-9)
    assert est.is_lower_bound and est.kind == "total"


def test_partial_modulus_of_square():
    # sup |u1^2 - u2^2| with |u1 - u2| <= 0.1 on [0, 1] is 1 - 0.81
    assert partial_modulus(lambda x, y: x**2, UNIT, Axis.X, 0.1).value == pytest.approx(0.19, rel=1e-9)


def test_partial_modulus_ignores_other_axis():
    assert partial_modulus(lambda x, y: y, UNIT, Axis.X, 0.3).value == 0.0


def test_mixed_modulus_of_product():
    # |Delta(ts)| = |t - x||s - y|, strictly below 0.1 on a 0.001 grid
    est = mixed_modulus(lambda x, y: x * y, UNIT, 0.1, 0.1, grid_step=0.001)
    assert est.value == pytest.approx(0.099**2, rel=1e-9)


def test_mixed_modulus_zero_for_separable():
    assert mixed_modulus(lambda x, y: np.sin(x) + y**3, UNIT, 0.5, 0.5).value < 1e-14


def test_mixed_difference_exp():
    v = mixed_difference(lambda x, y: np.exp(x + y), Point2(1, 1), Point2(0, 0))
    assert v == pytest.approx(math.e**2 - 2 * math.e + 1, rel=1e-14)


def test_zero_delta():
    f = catalog("sin_x_plus_y")
    assert total_modulus(f, UNIT, 0.0).value == 0.0
    assert partial_modulus(f, UNIT, Axis.Y, 0.0).value == 0.0
    assert mixed_modulus(f, UNIT, 0.0, 0.3).value == 0.0


@settings(max_examples=25, deadline=None)
@given(d1=st.floats(0, 0.6), d2=st.floats(0, 0.6))
def test_monotone_in_delta(d1, d2):
    f = catalog("x_sin_pi_y")
    lo, hi = sorted((d1, d2))
    assert total_modulus(f, UNIT, lo, 0.02).value <= total_modulus(f, UNIT, hi, 0.02).value
    assert partial_modulus(f, UNIT, Axis.Y, lo, 0.02).value <= partial_modulus(f, UNIT, Axis.Y, hi, 0.02).value
    assert mixed_modulus(f, UNIT, lo, 0.3, 0.02).value <= mixed_modulus(f, UNIT, hi, 0.3, 0.02).value


@pytest.mark.parametrize("name", ["x_sin_pi_y", "sin_x_plus_y", "x2y_cos_piy", "exp_x_plus_y"])
def test_grid_estimates_below_analytic(name):
    f = catalog(name)
    rect = f.domain
    grid, analytic = GridModuli(f, rect), AnalyticModuli(f.bounds_on(rect))
    for delta in (0.05, 0.2):
        assert grid.total(delta) <= analytic.total(delta) * (1 + 1e-12)
        assert grid.partial_x(delta) <= analytic.partial_x(delta) * (1 + 1e-12)
        assert grid.partial_y(delta) <= analytic.partial_y(delta) * (1 + 1e-12)
        assert grid.mixed(delta, delta) <= analytic.mixed(delta, delta) * (1 + 1e-12)


def test_b_derivative_probe():
    dbf = b_derivative(lambda x, y: x**2 * y, h=1e-4)
    # d2/dxdy x^2 y = 2x, the forward difference adds h
    assert dbf(0.5, 0.3) == pytest.approx(1.0 + 1e-4, rel=1e-6)


def test_lipschitz_spec_validation():
    with pytest.raises(InvalidParameters):
        LipschitzSpec(0.0)
    with pytest.raises(InvalidParameters):
        LipschitzSpec(1.0, 1.5, 1.0)


def test_bound_formulas():
    params, p = OperatorParams(10, 20, 2.0), Point2(0.5, 0.25)
    b = catalog("x_sin_pi_y").bounds_on(UNIT)
    mod = AnalyticModuli(b)
    assert bound_total(mod, params, p) == pytest.approx(2 * math.hypot(1, math.pi) * delta_mn(params, p))
    expected = 2 * (delta_axis(params, p, Axis.X) + math.pi * delta_axis(params, p, Axis.Y))
    assert bound_partial(mod, params, p) == pytest.approx(expected)
    dx, dy = delta_prime(params, p, Axis.X), delta_prime(params, p, Axis.Y)
    assert bound_gbs(mod, params, p) == pytest.approx(4 * math.pi * dx * dy)
    assert bound_lipschitz_gbs(LipschitzSpec(3.0, 0.5, 1.0), params, p) == pytest.approx(3 * dx**0.5 * dy)


def test_bdiff_constants():
    k = BDiffConstants.of(BoundConstants(1, 1))
    assert k.M1 == pytest.approx(math.sqrt(2) + math.sqrt(18))
    assert k.M3 == pytest.approx(2.0)
    assert k.M4 == pytest.approx(max(k.M1 * k.M2, k.M3))


def test_bdiff_zero_for_separable():
    params = OperatorParams(10, 10, 2.0)
    assert bound_bdiff(0.0, lambda h1, h2: 0.0, BoundConstants(1, 1), params) == 0.0


def test_bdiff_modulus_uses_fourth_derivative():
    b = catalog("sin_x_plus_y").bounds_on(UNIT)
    mod = BDerivativeModuli(b)
    assert mod.mixed(0.1, 0.2) == pytest.approx(0.02)
    assert mod.mixed(10, 10) == pytest.approx(4.0)
