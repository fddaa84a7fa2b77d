"""Moduli of continuity and the error bounds built on them.

Grid estimators return the sup over grid point pairs, which can only
undershoot the true modulus; they are flagged ``is_lower_bound`` and serve as
diagnostics. Inequality checks use :class:`AnalyticModuli`, built from
derivative bounds that are valid upper bounds on a rectangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .errors import InvalidParameters
from .function import FunctionBounds, as_function
from .kernel import Axis, Point2, Rect
from .moments import BoundConstants, delta_axis, delta_mn, delta_prime

_SLACK = 1e-9  # relative slack when comparing grid offsets with delta


@dataclass(frozen=True)
class ModulusEstimate:
    kind: str  # 'total', 'partial_x', 'partial_y' or 'mixed'
    delta1: float
    delta2: float
    value: float
    grid_step: float
    is_lower_bound: bool = True


@dataclass(frozen=True)
class LipschitzSpec:
    """|Delta f| <= M |t - x|^mu1 |s - y|^mu2."""

    M: float
    mu1: float = 1.0
    mu2: float = 1.0

    def __post_init__(self):
        if not self.M > 0:
            raise InvalidParameters("M must be positive")
        if not (0 < self.mu1 <= 1 and 0 < self.mu2 <= 1):
            raise InvalidParameters("exponents must lie in (0, 1]")


def mixed_difference(f, probe: Point2, base: Point2) -> float:
    """f(u,v) - f(u,v0) - f(u0,v) + f(u0,v0) for probe (u,v) and base (u0,v0)."""
    f = as_function(f)
    u, v, u0, v0 = probe.x, probe.y, base.x, base.y
    return f(u, v) - f(u, v0) - f(u0, v) + f(u0, v0)


# --- grid estimators ---------------------------------------------------------


def _grid(f, rect: Rect, grid_step: Optional[float]):
    if grid_step is None:
        grid_step = max(rect.c, rect.d) / 400
    if not grid_step > 0:
        raise InvalidParameters("grid_step must be positive")
    nx = max(1, int(round(rect.c / grid_step)))
    ny = max(1, int(round(rect.d / grid_step)))
    xs = np.linspace(0.0, rect.c, nx + 1)
    ys = np.linspace(0.0, rect.d, ny + 1)
    values = as_function(f).grid(xs[:, None], ys[None, :])
    return values, rect.c / nx, rect.d / ny


def _max_le(delta: float, h: float) -> int:
    """Largest integer k with k h <= delta."""
    return int(math.floor(delta / h * (1 + _SLACK)))


def _max_lt(delta: float, h: float) -> int:
    """Largest integer k with k h < delta."""
    return max(0, int(math.ceil(delta / h * (1 - _SLACK))) - 1)


def _window_reach(F, di: int, kj: int) -> float:
    """max |F[i+di, j'] - F[i, j]| over |j' - j| <= kj."""
    size = 2 * kj + 1
    hi = maximum_filter1d(F[di:], size, axis=1, mode="nearest")
    lo = minimum_filter1d(F[di:], size, axis=1, mode="nearest")
    base = F[: F.shape[0] - di]
    return float(max(np.max(hi - base), np.max(base - lo)))


def total_modulus(f, rect: Rect, delta: float, grid_step: Optional[float] = None) -> ModulusEstimate:
    """sup |f(t,s) - f(x,y)| over grid pairs at Euclidean distance <= delta."""
    F, hx, hy = _grid(f, rect, grid_step)
    best = 0.0
    if delta > 0:
        kx = min(_max_le(delta, hx), F.shape[0] - 1)
        lim = (delta * (1 + _SLACK)) ** 2
        for di in range(0, kx + 1):
            rest = lim - (di * hx) ** 2
            if rest < 0:
                break
            kj = min(int(math.floor(math.sqrt(rest) / hy)), F.shape[1] - 1)
            best = max(best, _window_reach(F, di, kj))
    return ModulusEstimate("total", float(delta), 0.0, best, max(hx, hy))


def partial_modulus(f, rect: Rect, axis: Axis, delta: float, grid_step: Optional[float] = None) -> ModulusEstimate:
    """sup of |f(u1, y) - f(u2, y)| (or its y twin) with the other coordinate swept."""
    F, hx, hy = _grid(f, rect, grid_step)
    axis = Axis(axis)
    if axis is Axis.Y:
        F, hx = F.T, hy
    best = 0.0
    if delta > 0:
        for di in range(1, min(_max_le(delta, hx), F.shape[0] - 1) + 1):
            best = max(best, float(np.max(np.abs(F[di:] - F[:-di]))))
    return ModulusEstimate(f"partial_{axis.value}", float(delta), 0.0, best, max(hx, hy))


def mixed_modulus(f, rect: Rect, delta1: float, delta2: float, grid_step: Optional[float] = None) -> ModulusEstimate:
    """sup |Delta f| over grid pairs with |t-x| < delta1 and |s-y| < delta2."""
    F, hx, hy = _grid(f, rect, grid_step)
    best = 0.0
    k1 = min(_max_lt(delta1, hx), F.shape[0] - 1) if delta1 > 0 else 0
    k2 = min(_max_lt(delta2, hy), F.shape[1] - 1) if delta2 > 0 else 0
    # for a fixed x offset, the largest |Delta f| over s-offsets up to k2 is the
    # largest range of the row difference over a sliding window of k2 + 1 nodes
    if k2 > 0:
        for di in range(1, k1 + 1):
            rows = F[di:] - F[:-di]
            hi = maximum_filter1d(rows, k2 + 1, axis=1, mode="nearest")
            lo = minimum_filter1d(rows, k2 + 1, axis=1, mode="nearest")
            best = max(best, float(np.max(hi - lo)))
    return ModulusEstimate("mixed", float(delta1), float(delta2), best, max(hx, hy))


# --- modulus providers ---------------------------------------------------------


class AnalyticModuli:
    """Upper bounds for the moduli from derivative bounds on a rectangle.

    total:   |f(t,s) - f(x,y)| <= |(Lx, Ly)| * distance
    partial: Lx * delta, Ly * delta
    mixed:   |Delta f| <= L12 |t-x| |s-y|
    """

    is_lower_bound = False

    def __init__(self, bounds: FunctionBounds):
        self.bounds = bounds

    def total(self, delta: float) -> float:
        return math.hypot(self.bounds.lipschitz_x, self.bounds.lipschitz_y) * delta

    def partial_x(self, delta: float) -> float:
        return self.bounds.lipschitz_x * delta

    def partial_y(self, delta: float) -> float:
        return self.bounds.lipschitz_y * delta

    def mixed(self, delta1: float, delta2: float) -> float:
        return self.bounds.mixed_derivative_bound * delta1 * delta2


class BDerivativeModuli:
    """Mixed modulus of D_B f: min(4 ||D_B f||, ||d4f/dx2dy2|| h1 h2)."""

    is_lower_bound = False

    def __init__(self, bounds: FunctionBounds):
        self.bounds = bounds

    def mixed(self, delta1: float, delta2: float) -> float:
        crude = 4 * self.bounds.mixed_derivative_bound
        if self.bounds.mixed4_bound is None:
            return crude
        return min(crude, self.bounds.mixed4_bound * delta1 * delta2)


class GridModuli:
    """Grid estimates on a rectangle; lower bounds, for diagnostics only."""

    is_lower_bound = True

    def __init__(self, f, rect: Rect, grid_step: Optional[float] = None):
        self.f, self.rect, self.grid_step = f, rect, grid_step

    def total(self, delta: float) -> float:
        return total_modulus(self.f, self.rect, delta, self.grid_step).value

    def partial_x(self, delta: float) -> float:
        return partial_modulus(self.f, self.rect, Axis.X, delta, self.grid_step).value

    def partial_y(self, delta: float) -> float:
        return partial_modulus(self.f, self.rect, Axis.Y, delta, self.grid_step).value

    def mixed(self, delta1: float, delta2: float) -> float:
        return mixed_modulus(self.f, self.rect, delta1, delta2, self.grid_step).value


def b_derivative(f, h: float = 1e-4):
    """Finite-difference probe of D_B f: Delta f((x+h, y+h), (x, y)) / h^2."""
    f = as_function(f)

    def dbf(x, y):
        return (f.grid(x + h, y + h) - f.grid(x + h, y) - f.grid(x, y + h) + f.grid(x, y)) / (h * h)

    return as_function(dbf, name=f"D_B {f.name}")


# --- error bounds --------------------------------------------------------------


def bound_total(moduli, params, point: Point2) -> float:
    """2 omega(f; delta_{m,n}) for the base-a operator."""
    return 2.0 * moduli.total(delta_mn(params, point))


def bound_partial(moduli, params, point: Point2) -> float:
    """2 (omega_1(f; delta_m) + omega_2(f; delta_n))."""
    return 2.0 * (
        moduli.partial_x(delta_axis(params, point, Axis.X)) + moduli.partial_y(delta_axis(params, point, Axis.Y))
    )


def bound_gbs(moduli, params, point: Point2) -> float:
    """4 omega_B(f; sqrt(x(x+1)/m), sqrt(y(y+1)/n)) for the Boolean sum."""
    return 4.0 * moduli.mixed(delta_prime(params, point, Axis.X), delta_prime(params, point, Axis.Y))


def bound_lipschitz_gbs(spec: LipschitzSpec, params, point: Point2) -> float:
    """M dx'^mu1 dy'^mu2 for f in Lip_M(mu1, mu2)."""
    dx = delta_prime(params, point, Axis.X)
    dy = delta_prime(params, point, Axis.Y)
    return spec.M * dx**spec.mu1 * dy**spec.mu2


@dataclass(frozen=True)
class BDiffConstants:
    M1: float
    M2: float
    M3: float
    M4: float

    @classmethod
    def of(cls, consts: BoundConstants) -> "BDiffConstants":
        M1 = math.sqrt(consts.lambda_x) + math.sqrt(consts.M_x)
        M2 = math.sqrt(consts.lambda_y) + math.sqrt(consts.M_y)
        M3 = math.sqrt(consts.lambda_x * consts.lambda_y)
        return cls(M1, M2, M3, max(M1 * M2, M3))


def bound_bdiff(
    dbf_norm: float,
    dbf_modulus: Union[Callable[[float, float], float], object],
    consts: BoundConstants,
    params,
) -> float:
    """M4 / sqrt(mn) * (3 M3 ||D_B f|| + omega_B(D_B f; 1/sqrt(m), 1/sqrt(n))).

    ``dbf_modulus`` is either a callable (h1, h2) -> value or a provider with
    a ``mixed`` method. Valid for probe points inside [0, c] x [0, d].
    """
    k = BDiffConstants.of(consts)
    omega = dbf_modulus.mixed if hasattr(dbf_modulus, "mixed") else dbf_modulus
    h1, h2 = 1 / math.sqrt(params.m), 1 / math.sqrt(params.n)
    return k.M4 / math.sqrt(params.m * params.n) * (3 * k.M3 * dbf_norm + omega(h1, h2))
