"""Product-Poisson weights and certified truncation of the double series.

The weight of the base-``a`` operator factors exactly into two Poisson mass
functions with rates

    lambda_x = x * log(a) / (a**(1/m) - 1),   lambda_y = y * log(a) / (a**(1/n) - 1),

so every operator value is an expectation of f(K1/m, K2/n) with K1, K2
independent Poisson variables. The infinite sums are cut to a rectangle of
indices whose excluded mass is bounded with Chernoff tails; for unbounded
integrands the rectangle is additionally doubled until the sum stabilizes.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InvalidParameters, TruncationFailure

_EPS = sys.float_info.epsilon


class Axis(str, enum.Enum):
    X = "x"
    Y = "y"


def _check_int(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidParameters(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class OperatorParams:
    """The triple (m, n, a) shared by every base-``a`` operator."""

    m: int
    n: int
    a: float

    def __post_init__(self):
        _check_int("m", self.m)
        _check_int("n", self.n)
        a = float(self.a)
        if not math.isfinite(a) or a <= 0.0 or a == 1.0:
            raise InvalidParameters(f"a must be positive and different from 1, got {self.a!r}")
        object.__setattr__(self, "a", a)

    def degree(self, axis: Axis) -> int:
        return self.m if Axis(axis) is Axis.X else self.n

    def rate_factor(self, axis: Axis) -> float:
        """log(a) / (a**(1/d) - 1); positive for every admissible a."""
        la = math.log(self.a)
        return la / math.expm1(la / self.degree(axis))


@dataclass(frozen=True)
class ClassicalParams:
    """(m, n) for the classical operators whose Poisson rates are m*x and n*y."""

    m: int
    n: int

    def __post_init__(self):
        _check_int("m", self.m)
        _check_int("n", self.n)

    def degree(self, axis: Axis) -> int:
        return self.m if Axis(axis) is Axis.X else self.n

    def rate_factor(self, axis: Axis) -> float:
        return float(self.degree(axis))


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        for name in ("x", "y"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0:
                raise InvalidParameters(f"{name} must be a finite nonnegative number, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class Rect:
    """The compact domain [0, c] x [0, d]."""

    c: float
    d: float

    def __post_init__(self):
        for name in ("c", "d"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise InvalidParameters(f"{name} must be positive, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class TruncationPolicy:
    tail_tol: float = 1e-12
    spread_multiplier: float = 8.0
    max_terms: int = 10**6
    stabilization_rounds: int = 2

    def __post_init__(self):
        if not self.tail_tol > 0:
            raise InvalidParameters("tail_tol must be positive")
        if not self.spread_multiplier >= 1:
            raise InvalidParameters("spread_multiplier must be >= 1")
        _check_int("max_terms", self.max_terms)
        _check_int("stabilization_rounds", self.stabilization_rounds)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SummationWindow:
    k1_lo: int
    k1_hi: int
    k2_lo: int
    k2_hi: int

    def __post_init__(self):
        if not (0 <= self.k1_lo <= self.k1_hi and 0 <= self.k2_lo <= self.k2_hi):
            raise InvalidParameters(f"malformed window {self}")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.k1_hi - self.k1_lo + 1, self.k2_hi - self.k2_lo + 1

    def contains(self, k1: int, k2: int) -> bool:
        return self.k1_lo <= k1 <= self.k1_hi and self.k2_lo <= k2 <= self.k2_hi


# --- rates and weights -----------------------------------------------------


def poisson_rate(params, axis: Axis, coord: float) -> float:
    """Poisson rate of the weight along one axis at coordinate ``coord``."""
    coord = float(coord)
    if not coord >= 0.0:
        raise InvalidParameters(f"coordinate must be nonnegative, got {coord!r}")
    if coord == 0.0:
        return 0.0
    return coord * params.rate_factor(axis)


def rates(params, point: Point2) -> Tuple[float, float]:
    return poisson_rate(params, Axis.X, point.x), poisson_rate(params, Axis.Y, point.y)


def poisson_log_pmf(k, lam: float):
    k = np.asarray(k, dtype=float)
    if lam == 0.0:
        return np.where(k == 0, 0.0, -np.inf)
    return -lam + k * math.log(lam) - gammaln(k + 1.0)


def weight(params, point: Point2, k1: int, k2: int) -> float:
    """s^a_{m,n}(x, y) for the index pair (k1, k2), evaluated in log space."""
    if k1 < 0 or k2 < 0:
        return 0.0
    lx, ly = rates(params, point)
    logw = 0.0
    for lam, k in ((lx, k1), (ly, k2)):
        if lam == 0.0:
            if k != 0:
                return 0.0
            continue
        logw += -lam + k * math.log(lam) - math.lgamma(k + 1)
    return math.exp(logw)


# --- windows ---------------------------------------------------------------


def _log_chernoff(lam: float, k: int) -> float:
    # log of exp(-lam) (e lam / k)^k, valid for P(K >= k), k > lam, and P(K <= k), k < lam
    if k == 0:
        return -lam
    return -lam + k + k * math.log(lam / k)


def poisson_tail_bound(lam: float, lo: int, hi: int) -> float:
    """Upper bound on P(K < lo) + P(K > hi) for K ~ Poisson(lam)."""
    if lam == 0.0:
        return 0.0 if lo == 0 else 1.0
    total = 0.0
    if lo > 0:
        k = lo - 1
        total += 1.0 if k >= lam else math.exp(_log_chernoff(lam, k))
    k = hi + 1
    total += 1.0 if k <= lam else math.exp(_log_chernoff(lam, k))
    return min(total, 1.0)


@dataclass(frozen=True)
class _AxisSpan:
    centre: int
    half: int

    @property
    def lo(self) -> int:
        return max(0, self.centre - self.half)

    @property
    def hi(self) -> int:
        return self.centre + self.half

    def doubled(self) -> "_AxisSpan":
        return _AxisSpan(self.centre, 2 * self.half)


def _check_span(span: _AxisSpan, policy: TruncationPolicy):
    if span.hi - span.lo + 1 > policy.max_terms:
        raise TruncationFailure(
            f"summation window needs more than max_terms={policy.max_terms} indices per axis"
        )


def _chernoff_span(lam: float, policy: TruncationPolicy, budget: float) -> _AxisSpan:
    if lam == 0.0:
        return _AxisSpan(0, 0)
    span = _AxisSpan(int(math.floor(lam)), max(1, math.ceil(policy.spread_multiplier * math.sqrt(lam))))
    while True:
        _check_span(span, policy)
        if poisson_tail_bound(lam, span.lo, span.hi) < budget:
            return span
        span = span.doubled()


def _window(sx: _AxisSpan, sy: _AxisSpan) -> SummationWindow:
    return SummationWindow(sx.lo, sx.hi, sy.lo, sy.hi)


def _axis_weights(lam: float, lo: int, hi: int):
    k = np.arange(lo, hi + 1)
    w = np.exp(poisson_log_pmf(k, lam))
    keep = w > 0.0
    return k[keep], w[keep]


def _grid_values(f, xs, ys) -> np.ndarray:
    if hasattr(f, "grid"):
        return f.grid(xs, ys)
    with np.errstate(all="ignore"):
        values = np.asarray(f(xs, ys), dtype=float)
    values = np.broadcast_to(values, np.broadcast(xs, ys).shape)
    if not np.isfinite(values).all():
        raise DomainError("function is not finite at a required grid node")
    return values


def _line_values(g, ts) -> np.ndarray:
    with np.errstate(all="ignore"):
        values = np.broadcast_to(np.asarray(g(ts), dtype=float), ts.shape)
    if not np.isfinite(values).all():
        raise DomainError("function is not finite at a required grid node")
    return values


def _double_sum(f, lams, scales, window: SummationWindow) -> float:
    k1, w1 = _axis_weights(lams[0], window.k1_lo, window.k1_hi)
    k2, w2 = _axis_weights(lams[1], window.k2_lo, window.k2_hi)
    values = _grid_values(f, (k1 / scales[0])[:, None], (k2 / scales[1])[None, :])
    # fsum is exactly rounded, so the result does not depend on summation order
    return math.fsum((w1[:, None] * w2[None, :] * values).ravel())


def _single_sum(g, lam, scale, span: _AxisSpan) -> float:
    k, w = _axis_weights(lam, span.lo, span.hi)
    return math.fsum(w * _line_values(g, k / scale))


def _is_bounded(growth) -> bool:
    return growth is not None and str(getattr(growth, "value", growth)) == "bounded"


def _stable(previous: float, current: float, policy: TruncationPolicy) -> bool:
    # a few ulps of slack: two exactly rounded sums of nearly equal term sets
    floor = 16 * _EPS * max(abs(previous), abs(current))
    return abs(current - previous) < max(policy.tail_tol, floor)


def _stabilize(evaluate, spans, policy: TruncationPolicy):
    value = evaluate(spans)
    agreed = 0
    while agreed < policy.stabilization_rounds:
        spans = tuple(s.doubled() for s in spans)
        for s in spans:
            _check_span(s, policy)
        new = evaluate(spans)
        agreed = agreed + 1 if _stable(value, new, policy) else 0
        value = new
    return value, spans


def poisson_expectation(f, lams, scales, policy: TruncationPolicy = DEFAULT_POLICY, growth=None):
    """E f(K1/scale_x, K2/scale_y) for independent Poisson(lams) counts.

    Returns ``(value, window)``. ``growth`` defaults to ``f.growth``; anything
    other than bounded growth triggers the stabilization doublings.
    """
    if growth is None:
        growth = getattr(f, "growth", None)
    budget = policy.tail_tol / 2
    spans = (_chernoff_span(lams[0], policy, budget), _chernoff_span(lams[1], policy, budget))
    if _is_bounded(growth):
        window = _window(*spans)
        return _double_sum(f, lams, scales, window), window
    value, spans = _stabilize(lambda sp: _double_sum(f, lams, scales, _window(*sp)), spans, policy)
    return value, _window(*spans)


def truncation_window(
    params,
    point: Point2,
    policy: TruncationPolicy = DEFAULT_POLICY,
    growth_hint=None,
    f=None,
) -> SummationWindow:
    """Index rectangle used to sum the operator series at ``point``.

    Without ``f`` (or with bounded growth) the window only certifies that the
    excluded Poisson mass is below ``tail_tol``. Given an unbounded ``f`` the
    window is the one on which the running sum stabilized.
    """
    lams = rates(params, point)
    if growth_hint is None and f is not None:
        growth_hint = getattr(f, "growth", None)
    if f is None or _is_bounded(growth_hint):
        budget = policy.tail_tol / 2
        return _window(_chernoff_span(lams[0], policy, budget), _chernoff_span(lams[1], policy, budget))
    _, window = poisson_expectation(f, lams, (params.m, params.n), policy, growth_hint)
    return window


def expectation(f, params, point: Point2, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Truncated double sum of s^a_{m,n}(x, y) * f(k1/m, k2/n)."""
    value, _ = poisson_expectation(f, rates(params, point), (params.m, params.n), policy)
    return value


def axis_expectation(
    g: Callable,
    params,
    axis: Axis,
    coord: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
    growth=None,
) -> float:
    """One-dimensional factor of the expectation: sum over k of p_k * g(k/d)."""
    lam = poisson_rate(params, axis, coord)
    scale = params.degree(axis)
    if growth is None:
        growth = getattr(g, "growth", None)
    span = _chernoff_span(lam, policy, policy.tail_tol / 2)
    if _is_bounded(growth):
        return _single_sum(g, lam, scale, span)
    value, _ = _stabilize(lambda sp: _single_sum(g, lam, scale, sp[0]), (span,), policy)
    return value


def support_rect(window: SummationWindow, params, point: Point2) -> Rect:
    """Smallest [0, c] x [0, d] holding the probe point and every window node."""
    c = max(point.x, window.k1_hi / params.degree(Axis.X))
    d = max(point.y, window.k2_hi / params.degree(Axis.Y))
    return Rect(max(c, 1e-300), max(d, 1e-300))
