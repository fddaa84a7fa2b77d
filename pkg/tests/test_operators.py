import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szasz_gbs import (
    ClassicalParams,
    OperatorKind,
    OperatorParams,
    Point2,
    QuadratureSpec,
    as_function,
    catalog,
    eval_bivariate,
    eval_gbs,
    eval_kantorovich,
    eval_mfs,
    eval_mfs_gbs,
    evaluate,
)
from szasz_gbs.errors import InvalidParameters
from szasz_gbs.moments import raw_moment_closed


def _first_moments(params, p):
    return raw_moment_closed(params, p, (1, 0)), raw_moment_closed(params, p, (0, 1))


def test_bivariate_linear_polynomial(params):
    # Y(alpha + beta t + gamma s) is determined by the first raw moments
    p = Point2(1.3, 0.4)
    ex, ey = _first_moments(params, p)
    got = eval_bivariate(lambda t, s: 2 + 3 * t - 5 * s, params, p)
    assert got == pytest.approx(2 + 3 * ex - 5 * ey, rel=1e-13)


def test_bivariate_first_moment_formula():
    # E[K/m] = x log(a) / (m (a^(1/m) - 1)), written independently of the kernel
    m, a, x = 7, 3.0, 1.1
    params = OperatorParams(m, m, a)
    expected = x * math.log(a) / (m * (a ** (1 / m) - 1))
    assert eval_bivariate(lambda t, s: t, params, Point2(x, 0.2)) == pytest.approx(expected, rel=1e-13)


def test_gbs_on_product_equals_minus_first_moment_product(params):
    # GBS(ts) - xy = -(E t - x)(E s - y)
    p = Point2(0.7, 1.6)
    ex, ey = _first_moments(params, p)
    got = eval_gbs(lambda t, s: t * s, params, p)
    assert got - p.x * p.y == pytest.approx(-(ex - p.x) * (ey - p.y), rel=1e-10)


@pytest.mark.parametrize("g,h", [(np.sin, np.exp), (lambda t: t**3, np.cos), (np.sqrt, lambda s: s)])
def test_gbs_exact_on_separable(params, g, h):
    p = Point2(0.9, 1.4)
    f = lambda t, s: g(t) + h(s)  # noqa: E731
    assert abs(eval_gbs(f, params, p) - f(p.x, p.y)) <= 3e-12


@pytest.mark.parametrize("op", [eval_bivariate, eval_gbs, eval_mfs, eval_mfs_gbs])
def test_constants_reproduced(params, op):
    assert op(lambda t, s: np.full(np.broadcast(t, s).shape, 4.5), params, Point2(2, 3)) == pytest.approx(4.5, abs=1e-11)


def test_mfs_first_moment_exact(params):
    p = Point2(1.7, 0.3)
    assert eval_mfs(lambda t, s: t + s, params, p) == pytest.approx(2.0, rel=1e-13)


def test_mfs_second_moment(params):
    # classical: E[(K/m)^2] = x^2 + x/m
    p = Point2(1.7, 0.3)
    assert eval_mfs(lambda t, s: t * t, params, p) == pytest.approx(p.x**2 + p.x / params.m, rel=1e-13)


def test_kantorovich_linear():
    m, n = 12, 7
    p = Point2(0.6, 2.2)
    params = OperatorParams(m, n, 2.0)
    assert eval_kantorovich(lambda t, s: t, params, p) == pytest.approx(p.x + 1 / (2 * m), rel=1e-13)
    assert eval_kantorovich(lambda t, s: s, params, p) == pytest.approx(p.y + 1 / (2 * n), rel=1e-13)


def test_kantorovich_product_and_square():
    m, n = 12, 7
    p = Point2(0.6, 2.2)
    params = OperatorParams(m, n, 2.0)
    prod = (p.x + 1 / (2 * m)) * (p.y + 1 / (2 * n))
    assert eval_kantorovich(lambda t, s: t * s, params, p) == pytest.approx(prod, rel=1e-13)
    # E[(K/m)^2] + E[K/m]/m + 1/(3 m^2)
    sq = p.x**2 + 2 * p.x / m + 1 / (3 * m**2)
    assert eval_kantorovich(lambda t, s: t * t, params, p) == pytest.approx(sq, rel=1e-13)


def test_kantorovich_quadrature_exactness():
    # order-q Gauss-Legendre integrates degree 2q-1 exactly
    p, params = Point2(0.5, 0.5), OperatorParams(5, 5, 2.0)
    f = lambda t, s: t**5 * s**3  # noqa: E731
    low = eval_kantorovich(f, params, p, quad=QuadratureSpec(3))
    high = eval_kantorovich(f, params, p, quad=QuadratureSpec(12))
    assert low == pytest.approx(high, rel=1e-12)


def test_kantorovich_ignores_a():
    p = Point2(0.4, 0.8)
    f = lambda t, s: np.sin(t) * s  # noqa: E731
    assert eval_kantorovich(f, OperatorParams(9, 9, 2.0), p) == eval_kantorovich(f, OperatorParams(9, 9, 7.0), p)


def test_invalid_quadrature():
    with pytest.raises(InvalidParameters):
        QuadratureSpec(0)


@pytest.mark.parametrize("kind", list(OperatorKind))
def test_dispatch(kind, params, point):
    f = catalog("sin_x_plus_y")
    direct = {
        OperatorKind.BIVARIATE: eval_bivariate,
        OperatorKind.GBS: eval_gbs,
        OperatorKind.KANTOROVICH: eval_kantorovich,
        OperatorKind.MFS: eval_mfs,
        OperatorKind.MFS_GBS: eval_mfs_gbs,
    }[kind]
    assert evaluate(kind, f, params, point) == direct(f, params, point)


def test_classical_params_accepted(point):
    f = catalog("exp_x_plus_y")
    assert eval_bivariate(f, ClassicalParams(10, 10), point) == eval_mfs(f, OperatorParams(10, 10, 2.0), point)


@pytest.mark.parametrize("op", [eval_bivariate, eval_mfs])
def test_interpolates_at_origin(params, op):
    f = catalog("exp_x_plus_y")
    assert op(f, params, Point2(0, 0)) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0, 3), y=st.floats(0, 3), c=st.floats(-2, 2))
def test_gbs_linearity(x, y, c):
    params, p = OperatorParams(8, 8, 2.0), Point2(x, y)
    f = as_function(lambda t, s: np.sin(t * s))
    g = as_function(lambda t, s: t * t * s)
    combo = eval_gbs(lambda t, s: f.grid(t, s) + c * g.grid(t, s), params, p)
    parts = eval_gbs(f, params, p) + c * eval_gbs(g, params, p)
    assert combo == pytest.approx(parts, abs=1e-9 * (1 + abs(parts)))


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0, 3), y=st.floats(0, 3), m=st.integers(1, 40))
def test_positivity_all_nonnegative_ops(x, y, m):
    params, p = OperatorParams(m, m, 2.0), Point2(x, y)
    f = lambda t, s: (t - s) ** 2  # noqa: E731
    for op in (eval_bivariate, eval_mfs, eval_kantorovich):
        assert op(f, params, p) >= 0.0
