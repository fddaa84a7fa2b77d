"""The operator families and their comparators.

* ``eval_bivariate``   -- base-``a`` Szasz-Mirakjan type operator
* ``eval_gbs``         -- its generalized Boolean sum
* ``eval_kantorovich`` -- Kantorovich-Szasz operator (cell averages, rates m*x, n*y)
* ``eval_mfs``         -- classical Mirakjan-Favard-Szasz operator (rates m*x, n*y)
* ``eval_mfs_gbs``     -- Boolean sum of the classical operator
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameters
from .function import as_function
from .kernel import (
    DEFAULT_POLICY,
    ClassicalParams,
    Point2,
    TruncationPolicy,
    poisson_expectation,
    rates,
)


class OperatorKind(str, enum.Enum):
    BIVARIATE = "bivariate"
    GBS = "gbs"
    KANTOROVICH = "kantorovich"
    MFS = "mfs"
    MFS_GBS = "mfs-gbs"


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre nodes per axis for the Kantorovich cell integrals."""

    order: int = 8

    def __post_init__(self):
        if isinstance(self.order, bool) or int(self.order) != self.order or self.order < 1:
            raise InvalidParameters(f"quadrature order must be a positive integer, got {self.order!r}")


DEFAULT_QUAD = QuadratureSpec()


def classical(params) -> ClassicalParams:
    return params if isinstance(params, ClassicalParams) else ClassicalParams(params.m, params.n)


class _MixedDifference:
    """Delta f((t, s), (x, y)) = f(t, s) - f(t, y) - f(x, s) + f(x, y) as a function of (t, s)."""

    def __init__(self, f, point: Point2):
        self.f = f
        self.point = point
        self.growth = f.growth
        self.fxy = f(point.x, point.y)

    def grid(self, ts, ss):
        x, y = self.point.x, self.point.y
        f = self.f
        return f.grid(ts, ss) - f.grid(ts, y) - f.grid(x, ss) + self.fxy


def _boolean_sum(f, params, point, policy):
    f = as_function(f)
    delta = _MixedDifference(f, point)
    # sum of w * [f(x,s) + f(t,y) - f(t,s)] with the weights' unit mass used
    # exactly, so additively separable parts cancel before summation
    value, window = poisson_expectation(delta, rates(params, point), (params.m, params.n), policy)
    return delta.fxy - value, window


def bivariate_with_window(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY):
    """Operator value together with the summation window that produced it."""
    f = as_function(f)
    return poisson_expectation(f, rates(params, point), (params.m, params.n), policy)


def gbs_with_window(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY):
    return _boolean_sum(f, params, point, policy)


def eval_bivariate(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    return bivariate_with_window(f, params, point, policy)[0]


def eval_gbs(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    return _boolean_sum(f, params, point, policy)[0]


def eval_mfs(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    return eval_bivariate(f, classical(params), point, policy)


def eval_mfs_gbs(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    return _boolean_sum(f, classical(params), point, policy)[0]


@lru_cache(maxsize=64)
def _unit_gauss_legendre(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    # mapped to [0, 1], weights summing to 1
    return (nodes + 1.0) / 2.0, weights / 2.0


class _CellAverage:
    """(t, s) -> average of f over [t, t + 1/m] x [s, s + 1/n]."""

    def __init__(self, f, m: int, n: int, order: int):
        self.f = f
        self.growth = f.growth
        self.hx = 1.0 / m
        self.hy = 1.0 / n
        self.nodes, self.weights = _unit_gauss_legendre(order)

    def grid(self, ts, ss):
        ts, ss = np.broadcast_arrays(np.asarray(ts, float), np.asarray(ss, float))
        out = np.zeros(ts.shape)
        for ui, wi in zip(self.nodes, self.weights):
            for vj, wj in zip(self.nodes, self.weights):
                out += wi * wj * self.f.grid(ts + ui * self.hx, ss + vj * self.hy)
        return out


def eval_kantorovich(
    f,
    params,
    point: Point2,
    policy: TruncationPolicy = DEFAULT_POLICY,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """m n e^{-mx-ny} sum (mx)^k1/k1! (ny)^k2/k2! times the integral of f over cell (k1, k2)."""
    f = as_function(f)
    p = classical(params)
    cells = _CellAverage(f, p.m, p.n, quad.order)
    value, _ = poisson_expectation(cells, rates(p, point), (p.m, p.n), policy)
    return value


def evaluate(
    kind: OperatorKind,
    f,
    params,
    point: Point2,
    policy: TruncationPolicy = DEFAULT_POLICY,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    kind = OperatorKind(kind)
    if kind is OperatorKind.BIVARIATE:
        return eval_bivariate(f, params, point, policy)
    if kind is OperatorKind.GBS:
        return eval_gbs(f, params, point, policy)
    if kind is OperatorKind.KANTOROVICH:
        return eval_kantorovich(f, params, point, policy, quad)
    if kind is OperatorKind.MFS:
        return eval_mfs(f, params, point, policy)
    return eval_mfs_gbs(f, params, point, policy)
