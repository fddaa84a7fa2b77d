"""Closed-form moments of the base-``a`` operator, their bounds, and numeric checks.

Notation used below: ``A = a**(1/m) - 1`` and ``L = log(a)``. Every x-axis
formula has a y-axis twin obtained by the substitution (m, x) -> (n, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

from .errors import UnsupportedOrder
from .kernel import (
    DEFAULT_POLICY,
    Axis,
    Point2,
    Rect,
    TruncationPolicy,
    axis_expectation,
    expectation,
)

RAW_ORDERS = ((1, 0), (0, 1), (2, 0), (0, 2))
CENTRAL_ORDERS = ((1, 0), (0, 1), (2, 0), (0, 2), (4, 0), (0, 4))


@dataclass(frozen=True)
class MomentOrder:
    i: int
    j: int
    centered: bool


@dataclass(frozen=True)
class MomentReport:
    order: MomentOrder
    closed_form: float
    numeric: float
    abs_diff: float
    rel_diff: float


@dataclass(frozen=True)
class BoundConstants:
    """Constants of the rectangle [0, c] x [0, d] used by the error bounds."""

    c: float
    d: float

    @property
    def lambda_x(self) -> float:
        return self.c * (self.c + 1)

    @property
    def lambda_y(self) -> float:
        return self.d * (self.d + 1)

    @property
    def M_x(self) -> float:
        c = self.c
        return c**4 + 6 * c**3 + 10 * c**2 + c

    @property
    def M_y(self) -> float:
        d = self.d
        return d**4 + 6 * d**3 + 10 * d**2 + d

    @classmethod
    def of(cls, rect: Rect) -> "BoundConstants":
        return cls(rect.c, rect.d)


def _axis_args(params, point: Point2, axis: Axis):
    if axis is Axis.X:
        return params.m, point.x
    return params.n, point.y


def _axis_of(order) -> tuple:
    i, j = order
    if i and j:
        return None, None
    return (Axis.X, i) if i else (Axis.Y, j)


def _A_L(a: float, m: int):
    L = math.log(a)
    return math.expm1(L / m), L


# --- one-axis closed forms (x-axis notation) ---------------------------------


def _raw1(m, a, x):
    A, L = _A_L(a, m)
    return x * L / (m * A)


def _raw2(m, a, x):
    A, L = _A_L(a, m)
    return x * L * (A + x * L) / (m**2 * A**2)


def _central1(m, a, x):
    A, L = _A_L(a, m)
    # m a^{1/m} - log a - m == m A - L
    return -x * (m * A - L) / (m * A)


def _central2(m, a, x):
    A, L = _A_L(a, m)
    return x * (m**2 * x * A**2 - A * L * (2 * m * x - 1) + x * L**2) / (m**2 * A**2)


def _central4(m, a, x):
    A, L = _A_L(a, m)
    inner = (
        m**4 * x**3 * A**4
        - A**3 * (-1 + 4 * m * x - 6 * m**2 * x**2 + 4 * m**3 * x**3) * L
        + A**2 * x * (7 - 12 * m * x + 6 * m**2 * x**2) * L**2
        - 2 * A * x**2 * (-3 + 2 * m * x) * L**3
        + x**3 * L**4
    )
    return x * inner / (m**4 * A**4)


_RAW = {1: _raw1, 2: _raw2}
_CENTRAL = {1: _central1, 2: _central2, 4: _central4}


def raw_moment_closed(params, point: Point2, order) -> float:
    """Value of the operator on t^i s^j for (i, j) in RAW_ORDERS."""
    order = tuple(order)
    if order not in RAW_ORDERS:
        raise UnsupportedOrder(f"no closed-form raw moment of order {order}")
    axis, p = _axis_of(order)
    d, coord = _axis_args(params, point, axis)
    return _RAW[p](d, params.a, coord)


def central_moment_closed(params, point: Point2, order) -> float:
    """Value of the operator on (t-x)^i (s-y)^j for (i, j) in CENTRAL_ORDERS."""
    order = tuple(order)
    if order not in CENTRAL_ORDERS:
        raise UnsupportedOrder(f"no closed-form central moment of order {order}")
    axis, p = _axis_of(order)
    d, coord = _axis_args(params, point, axis)
    return _CENTRAL[p](d, params.a, coord)


def central_moment_bound(params, where, order, flavor: str = "pointwise") -> float:
    """Upper bounds for second and fourth central moments.

    ``pointwise`` takes a Point2 and gives x(x+1)/m (resp. y(y+1)/n);
    ``rectangle`` takes a Rect (or BoundConstants) and gives lambda_x/m for
    second order and M_x/m^2 for fourth order. The estimates hold for a > 1
    with log(a) not too large; below a = 1 they can fail.
    """
    order = tuple(order)
    if order not in ((2, 0), (0, 2), (4, 0), (0, 4)):
        raise UnsupportedOrder(f"no moment bound of order {order}")
    axis, p = _axis_of(order)
    d = params.degree(axis)
    if flavor == "pointwise":
        if p != 2:
            raise UnsupportedOrder("pointwise bounds exist for second order only")
        coord = where.x if axis is Axis.X else where.y
        return coord * (coord + 1) / d
    if flavor != "rectangle":
        raise ValueError(f"unknown flavor {flavor!r}")
    consts = where if isinstance(where, BoundConstants) else BoundConstants.of(where)
    if p == 2:
        return (consts.lambda_x if axis is Axis.X else consts.lambda_y) / d
    return (consts.M_x if axis is Axis.X else consts.M_y) / d**2


# --- numeric counterparts ------------------------------------------------------


def _power(center: float, p: int):
    def g(t):
        return (t - center) ** p

    g.growth = "polynomial"
    return g


def axis_moment(params, point: Point2, axis: Axis, p: int, centered: bool,
                policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Truncated one-axis sum of (t - x)^p or t^p."""
    _, coord = _axis_args(params, point, axis)
    g = _power(coord if centered else 0.0, p)
    return axis_expectation(g, params, axis, coord, policy)


def numeric_moment(params, point: Point2, order, centered: bool,
                   policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Moment by truncated summation, using the exact product form of the weight."""
    i, j = order
    value = 1.0
    if i:
        value *= axis_moment(params, point, Axis.X, i, centered, policy)
    if j:
        value *= axis_moment(params, point, Axis.Y, j, centered, policy)
    return value


def double_sum_moment(params, point: Point2, i: int, j: int, centered: bool,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Same moment summed directly over the two-dimensional window."""
    cx, cy = (point.x, point.y) if centered else (0.0, 0.0)

    def f(t, s):
        return (t - cx) ** i * (s - cy) ** j

    f.growth = "polynomial"
    return expectation(f, params, point, policy)


def mixed_central_moment(params, point: Point2, i: int, j: int,
                         policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Operator on (t-x)^{2i} (s-y)^{2j}, as the product of the two one-axis moments."""
    if i < 0 or j < 0:
        raise UnsupportedOrder("mixed moment exponents must be nonnegative")
    factors = []
    for axis, p in ((Axis.X, 2 * i), (Axis.Y, 2 * j)):
        if p == 0:
            factors.append(1.0)
        elif p in (2, 4):
            order = (p, 0) if axis is Axis.X else (0, p)
            factors.append(central_moment_closed(params, point, order))
        else:
            factors.append(axis_moment(params, point, axis, p, True, policy))
    return factors[0] * factors[1]


def delta_mn(params, point: Point2) -> float:
    """Square root of the sum of the two second central moments."""
    total = central_moment_closed(params, point, (2, 0)) + central_moment_closed(params, point, (0, 2))
    return math.sqrt(max(total, 0.0))


def delta_axis(params, point: Point2, axis: Axis) -> float:
    order = (2, 0) if Axis(axis) is Axis.X else (0, 2)
    return math.sqrt(max(central_moment_closed(params, point, order), 0.0))


def delta_prime(params, point: Point2, axis: Axis) -> float:
    """sqrt(x(x+1)/m) or sqrt(y(y+1)/n)."""
    order = (2, 0) if Axis(axis) is Axis.X else (0, 2)
    return math.sqrt(central_moment_bound(params, point, order, "pointwise"))


def _report(order: MomentOrder, closed: float, numeric: float) -> MomentReport:
    diff = abs(closed - numeric)
    return MomentReport(order, closed, numeric, diff, diff / max(1.0, abs(closed)))


def moment_report(params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY,
                  orders: Optional[list] = None) -> List[MomentReport]:
    """Closed forms next to truncated sums for every supported order."""
    rows = []
    wanted = orders or [MomentOrder(i, j, False) for i, j in RAW_ORDERS] + [
        MomentOrder(i, j, True) for i, j in CENTRAL_ORDERS
    ]
    for order in wanted:
        key = (order.i, order.j)
        closed = (central_moment_closed if order.centered else raw_moment_closed)(params, point, key)
        rows.append(_report(order, closed, numeric_moment(params, point, key, order.centered, policy)))
    return rows
