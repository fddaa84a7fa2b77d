import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szasz_gbs import DomainError, ParseError, Point2, Rect, UnknownFunction
from szasz_gbs.funcparser import (
    CATALOG_NAMES,
    BinOp,
    Call,
    Const,
    Neg,
    Num,
    Var,
    catalog,
    compile_numpy,
    evaluate,
    function_from_source,
    parse,
    to_source,
)
from szasz_gbs.funcparser.catalog import sup_abs_poly

# --- grammar ---------------------------------------------------------------------


@pytest.mark.parametrize("src,value", [
    ("1 + 2 * 3", 7.0),
    ("(1 + 2) * 3", 9.0),
    ("2^3^2", 512.0),
    ("-2^2", 4.0),
    ("8 / 4 / 2", 1.0),
    ("10 - 4 - 3", 3.0),
    ("--3", 3.0),
    ("2e1 + .5", 20.5),
    ("sqrt(16) + exp(0) + log(e)", 6.0),
    ("cos(pi)", -1.0),
])
def test_precedence_and_values(src, value):
    assert evaluate(parse(src), (0, 0)) == pytest.approx(value, rel=1e-15)


def test_variables():
    assert evaluate(parse("x*sin(pi*y)"), Point2(2, 0.5)) == pytest.approx(2.0)


def test_ast_shape():
    assert parse("x + y*2") == BinOp("+", Var("x"), BinOp("*", Var("y"), Num(2.0)))
    assert parse("-x^2") == BinOp("^", Neg(Var("x")), Num(2.0))
    assert parse("sin(pi)") == Call("sin", Const("pi"))


@pytest.mark.parametrize("src,offset,expected", [
    ("x +", 3, "x"),
    ("", 0, "("),
    ("(x", 2, ")"),
    ("sin x", 4, "("),
    ("x y", 2, "+"),
    ("foo(x)", 0, "sin"),
    ("x $ y", 2, "NUMBER"),
    ("x)", 1, "end of input"),
])
def test_parse_errors(src, offset, expected):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.offset == offset
    assert expected in info.value.expected


def test_error_offset_is_in_bytes():
    with pytest.raises(ParseError) as info:
        parse("x + π")
    assert info.value.offset == 4
    with pytest.raises(ParseError) as info:
        parse("(π")
    assert info.value.offset == 1


def test_unclosed_paren_lists_operators():
    with pytest.raises(ParseError) as info:
        parse("(x + 1")
    assert {")", "+", "*", "^"} <= info.value.expected


@pytest.mark.parametrize("src", ["log(0)", "log(x - 5)", "sqrt(-1)", "1/0", "exp(1000)", "(-8)^(1/3)"])
def test_domain_errors(src):
    with pytest.raises(DomainError):
        evaluate(parse(src), (1, 1))


def test_numpy_domain_error_via_function():
    f = function_from_source("log(x)")
    assert f(1.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        f(0.0, 0.0)


# --- round trip and totality ----------------------------------------------------------

_leaf = st.one_of(
    st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_infinity=False).map(Num),
    st.sampled_from([Var("x"), Var("y"), Const("pi"), Const("e")]),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "log", "sqrt"]), children),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
    )


expressions = st.recursive(_leaf, _extend, max_leaves=25)


@settings(max_examples=300, deadline=None)
@given(expressions)
def test_round_trip(expr):
    text = to_source(expr)
    assert parse(text) == expr
    assert to_source(parse(text)) == text


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="xy0123456789.e+-*/^() sincoexplgqrtpi", max_size=30))
def test_parser_is_total(text):
    try:
        parse(text)
    except ParseError as exc:
        assert 0 <= exc.offset <= len(text.encode())
        assert exc.expected


@settings(max_examples=200, deadline=None)
@given(expressions, st.floats(0, 3), st.floats(0, 3))
def test_scalar_and_vector_agree(expr, x, y):
    try:
        scalar = evaluate(expr, (x, y))
    except DomainError:
        return
    vector = compile_numpy(expr)(np.array([x]), np.array([y]))[0]
    if math.isfinite(vector):
        assert vector == pytest.approx(scalar, rel=1e-12, abs=1e-300)


# --- catalog ---------------------------------------------------------------------


def test_catalog_names():
    assert set(CATALOG_NAMES) == {"x_sin_pi_y", "sin_x_plus_y", "x2y_xm1_sin2piy", "x2y_cos_piy", "y2_cos_2pix",
                                  "exp_x_plus_y"}


def test_unknown_catalog_name():
    with pytest.raises(UnknownFunction) as info:
        catalog("nope")
    assert "nope" in str(info.value)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_source_matches_func(name):
    f = catalog(name)
    g = function_from_source(f.source)
    rng = np.random.default_rng(11)
    xs, ys = rng.uniform(0, f.domain.c, 50), rng.uniform(0, f.domain.d, 50)
    np.testing.assert_allclose(g.grid(xs, ys), f.grid(xs, ys), rtol=1e-14, atol=1e-14)


def _num_derivs(f, x, y, h):
    fx = (f(x + h, y) - f(x - h, y)) / (2 * h)
    fy = (f(x, y + h) - f(x, y - h)) / (2 * h)
    fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h)
    return fx, fy, fxy


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_metadata_is_valid(name):
    # derivative bounds must hold at 10^4 random points of the domain
    f = catalog(name)
    meta = f.metadata
    rng = np.random.default_rng(5)
    h = 1e-4
    xs = rng.uniform(h, f.domain.c - h, 10_000)
    ys = rng.uniform(h, f.domain.d - h, 10_000)
    fx, fy, fxy = _num_derivs(f.grid, xs, ys, h)
    slack = 1e-5 * (1 + np.max(np.abs(f.grid(xs, ys))))
    assert np.max(np.abs(fx)) <= meta.lipschitz_x + slack
    assert np.max(np.abs(fy)) <= meta.lipschitz_y + slack
    assert np.max(np.abs(fxy)) <= meta.mixed_derivative_bound + 1e2 * slack
    assert np.max(np.abs(f.grid(xs, ys))) <= meta.sup_abs * (1 + 1e-12)


def test_metadata_bounds_grow_with_rect():
    f = catalog("x2y_cos_piy")
    small, large = f.bounds_on(Rect(1, 1)), f.bounds_on(Rect(3, 2))
    assert large.lipschitz_x >= small.lipschitz_x
    assert large.mixed_derivative_bound >= small.mixed_derivative_bound


def test_sup_abs_poly():
    # x^3 - x^2 on [0, 1] peaks in absolute value at x = 2/3
    assert sup_abs_poly((0, 0, -1, 1), 1.0) == pytest.approx(4 / 27)
    assert sup_abs_poly((0, 0, -1, 1), 2.0) == pytest.approx(4.0)
