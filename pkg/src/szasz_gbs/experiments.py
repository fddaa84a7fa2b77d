"""Error tables, operator comparisons, convergence sweeps and bound reports."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import InvalidParameters
from .function import as_function
from .kernel import DEFAULT_POLICY, OperatorParams, Point2, Rect, TruncationPolicy, support_rect
from .moduli import (
    AnalyticModuli,
    BDerivativeModuli,
    LipschitzSpec,
    bound_bdiff,
    bound_gbs,
    bound_lipschitz_gbs,
    bound_partial,
    bound_total,
)
from .moments import BoundConstants
from .operators import (
    DEFAULT_QUAD,
    QuadratureSpec,
    bivariate_with_window,
    eval_bivariate,
    eval_gbs,
    eval_kantorovich,
    eval_mfs_gbs,
    gbs_with_window,
)

DEFAULT_PROBE_POINT = Point2(0.5, 0.5)
DEFAULT_A = 2.0


class ProbeKind(str, enum.Enum):
    SINGLE_POINT = "point"
    GRID_MAX = "grid-max"
    GRID_MEAN = "grid-mean"


def grid_points(rect: Rect, step: float) -> List[Point2]:
    """Points of the step-aligned grid on [0, c] x [0, d], x-major."""
    xs = np.linspace(0.0, rect.c, int(round(rect.c / step)) + 1)
    ys = np.linspace(0.0, rect.d, int(round(rect.d / step)) + 1)
    return [Point2(float(x), float(y)) for x in xs for y in ys]


@dataclass(frozen=True)
class ProbeMode:
    """Where operator errors are measured and how they are aggregated."""

    kind: ProbeKind = ProbeKind.SINGLE_POINT
    point: Optional[Point2] = DEFAULT_PROBE_POINT
    rect: Optional[Rect] = None
    step: Optional[float] = None

    @classmethod
    def single_point(cls, point: Point2 = DEFAULT_PROBE_POINT) -> "ProbeMode":
        return cls(ProbeKind.SINGLE_POINT, point)

    @classmethod
    def grid_max(cls, rect: Rect, step: float) -> "ProbeMode":
        return cls(ProbeKind.GRID_MAX, None, rect, step)

    @classmethod
    def grid_mean(cls, rect: Rect, step: float) -> "ProbeMode":
        return cls(ProbeKind.GRID_MEAN, None, rect, step)

    def points(self) -> List[Point2]:
        if self.kind is ProbeKind.SINGLE_POINT:
            return [self.point]
        return grid_points(self.rect, self.step)

    def aggregate(self, errors: Sequence[float]) -> float:
        if self.kind is ProbeKind.GRID_MEAN:
            return math.fsum(errors) / len(errors)
        return max(errors)

    def describe(self) -> str:
        if self.kind is ProbeKind.SINGLE_POINT:
            return f"point({self.point.x!r},{self.point.y!r})"
        return f"{self.kind.value}([0,{self.rect.c!r}]x[0,{self.rect.d!r}],step={self.step!r})"


@dataclass(frozen=True)
class ErrorTableRow:
    m: int
    n: int
    err_bivariate: float
    err_gbs: float
    err_kantorovich: Optional[float] = None
    err_mfs_gbs: Optional[float] = None


def _check_m_list(m_list, minimum=1):
    m_list = [int(m) for m in m_list]
    if len(m_list) < minimum:
        raise InvalidParameters(f"need at least {minimum} values of m")
    if any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise InvalidParameters("m_list must be strictly ascending")
    return m_list


def _errors(op, f, params, probe: ProbeMode, policy) -> float:
    return probe.aggregate([abs(op(f, params, p, policy) - f(p.x, p.y)) for p in probe.points()])


def run_error_table(f, a: float, m_list, probe: ProbeMode = ProbeMode(),
                    policy: TruncationPolicy = DEFAULT_POLICY) -> List[ErrorTableRow]:
    """|Y - f| and |GBS - f| along m = n."""
    f = as_function(f)
    rows = []
    for m in _check_m_list(m_list):
        params = OperatorParams(m, m, a)
        rows.append(ErrorTableRow(m, m, _errors(eval_bivariate, f, params, probe, policy),
                                  _errors(eval_gbs, f, params, probe, policy)))
    return rows


def run_mfs_comparison(f, a: float, m_list, probe: ProbeMode = ProbeMode(),
                       policy: TruncationPolicy = DEFAULT_POLICY) -> List[ErrorTableRow]:
    """Boolean sum of the base-a operator against the classical one."""
    f = as_function(f)
    rows = []
    for m in _check_m_list(m_list):
        params = OperatorParams(m, m, a)
        rows.append(ErrorTableRow(
            m, m,
            err_bivariate=_errors(eval_bivariate, f, params, probe, policy),
            err_gbs=_errors(eval_gbs, f, params, probe, policy),
            err_mfs_gbs=_errors(eval_mfs_gbs, f, params, probe, policy),
        ))
    return rows


@dataclass
class KantorovichComparison:
    m: int
    n: int
    a: float
    xs: np.ndarray
    ys: np.ndarray
    f_values: np.ndarray
    bivariate: np.ndarray
    kantorovich: np.ndarray

    @property
    def err_bivariate(self) -> np.ndarray:
        return np.abs(self.bivariate - self.f_values)

    @property
    def err_kantorovich(self) -> np.ndarray:
        return np.abs(self.kantorovich - self.f_values)

    @property
    def mean_err_bivariate(self) -> float:
        return float(np.mean(self.err_bivariate))

    @property
    def mean_err_kantorovich(self) -> float:
        return float(np.mean(self.err_kantorovich))

    @property
    def max_err_bivariate(self) -> float:
        return float(np.max(self.err_bivariate))

    @property
    def max_err_kantorovich(self) -> float:
        return float(np.max(self.err_kantorovich))


def run_kantorovich_comparison(f, a: float, m: int, rect: Rect, step: float,
                               quad: QuadratureSpec = DEFAULT_QUAD,
                               policy: TruncationPolicy = DEFAULT_POLICY) -> KantorovichComparison:
    """Both operator surfaces on a grid over ``rect`` with m = n."""
    f = as_function(f)
    params = OperatorParams(m, m, a)
    xs = np.linspace(0.0, rect.c, int(round(rect.c / step)) + 1)
    ys = np.linspace(0.0, rect.d, int(round(rect.d / step)) + 1)
    shape = (len(xs), len(ys))
    fv, yb, kn = np.empty(shape), np.empty(shape), np.empty(shape)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            p = Point2(float(x), float(y))
            fv[i, j] = f(p.x, p.y)
            yb[i, j] = eval_bivariate(f, params, p, policy)
            kn[i, j] = eval_kantorovich(f, params, p, policy, quad)
    return KantorovichComparison(m, m, a, xs, ys, fv, yb, kn)


@dataclass
class SweepResult:
    rows: List[ErrorTableRow]
    slope_bivariate: Optional[float]
    slope_gbs: Optional[float]
    noise_floor: bool = False


def loglog_slope(ms, errs, floor: float) -> Optional[float]:
    """Least-squares slope of log(err) against log(m), dropping rows below ``floor``."""
    pts = [(math.log(m), math.log(e)) for m, e in zip(ms, errs) if e >= floor]
    if len(pts) < 4:
        return None
    lm, le = zip(*pts)
    return float(np.polyfit(lm, le, 1)[0])


def run_convergence_sweep(f, a: float, m_list, probe: ProbeMode = ProbeMode(),
                          policy: TruncationPolicy = DEFAULT_POLICY) -> SweepResult:
    m_list = _check_m_list(m_list, minimum=4)
    rows = run_error_table(f, a, m_list, probe, policy)
    floor = 10 * policy.tail_tol
    ms = [r.m for r in rows]
    sb = loglog_slope(ms, [r.err_bivariate for r in rows], floor)
    sg = loglog_slope(ms, [r.err_gbs for r in rows], floor)
    return SweepResult(rows, sb, sg, noise_floor=sb is None or sg is None)


# --- error bounds --------------------------------------------------------------

BOUND_NAMES = ("total", "partial", "gbs_mixed", "lipschitz_gbs", "b_differentiable")


@dataclass(frozen=True)
class BoundRow:
    m: int
    n: int
    x: float
    y: float
    err: float
    bound_name: str
    bound_value: float
    holds: bool

    @property
    def tightness(self) -> float:
        return self.bound_value / self.err if self.err > 0 else math.inf


@dataclass
class BoundReport:
    function: str
    a: float
    rect: Rect
    rows: List[BoundRow] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows)


def bound_rows(f, params: OperatorParams, point: Point2, rect: Rect,
               policy: TruncationPolicy = DEFAULT_POLICY) -> List[BoundRow]:
    """Measured errors against every bound at one probe point.

    Derivative bounds are taken on the smallest rectangle holding all nodes
    used by the truncated sums, so they are valid for every term. The
    allowed slack ``tail_tol * (1 + |f(x, y)|)`` covers the truncated mass.
    """
    if f.bounds_on is None:
        raise InvalidParameters(f"{f.name} has no analytic metadata; bound reports need it")
    fv = f(point.x, point.y)
    yb, w1 = bivariate_with_window(f, params, point, policy)
    gb, w2 = gbs_with_window(f, params, point, policy)
    s1, s2 = support_rect(w1, params, point), support_rect(w2, params, point)
    bounds = f.bounds_on(Rect(max(s1.c, s2.c), max(s1.d, s2.d)))
    moduli = AnalyticModuli(bounds)
    err_y, err_g = abs(yb - fv), abs(gb - fv)
    lip = LipschitzSpec(max(bounds.mixed_derivative_bound, 1e-300), 1.0, 1.0)
    values = (
        ("total", err_y, bound_total(moduli, params, point)),
        ("partial", err_y, bound_partial(moduli, params, point)),
        ("gbs_mixed", err_g, bound_gbs(moduli, params, point)),
        ("lipschitz_gbs", err_g, bound_lipschitz_gbs(lip, params, point)),
        ("b_differentiable", err_g, bound_bdiff(bounds.mixed_derivative_bound, BDerivativeModuli(bounds),
                                                 BoundConstants.of(rect), params)),
    )
    slack = policy.tail_tol * (1 + abs(fv))
    return [BoundRow(params.m, params.n, point.x, point.y, err, name, bound, err <= bound + slack)
            for name, err, bound in values]


def run_bound_report(f, a: float, m_list, rect: Rect, policy: TruncationPolicy = DEFAULT_POLICY,
                     step: float = 0.25) -> BoundReport:
    """Check each error bound at every m = n and every grid point of ``rect``."""
    f = as_function(f)
    report = BoundReport(f.name, a, rect)
    for m in _check_m_list(m_list):
        params = OperatorParams(m, m, a)
        for p in grid_points(rect, step):
            report.rows.extend(bound_rows(f, params, p, rect, policy))
    return report
