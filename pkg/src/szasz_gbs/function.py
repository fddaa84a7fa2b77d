"""Evaluable bivariate functions and their analytic metadata."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .kernel import Rect


class Growth(str, enum.Enum):
    BOUNDED = "bounded"
    POLYNOMIAL = "polynomial"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class FunctionBounds:
    """Sup-norm bounds of derivatives on one rectangle.

    ``lipschitz_x``/``lipschitz_y`` bound |df/dx| and |df/dy|,
    ``mixed_derivative_bound`` bounds |d2f/dxdy| (the B-derivative) and
    ``mixed4_bound`` bounds |d4f/dx2dy2|, which controls the mixed modulus of
    the B-derivative itself.
    """

    rect: Rect
    lipschitz_x: float
    lipschitz_y: float
    mixed_derivative_bound: float
    mixed4_bound: Optional[float] = None
    sup_abs: Optional[float] = None


@dataclass(frozen=True, eq=False)
class BivariateFunction:
    """A function f(x, y) evaluated with numpy broadcasting.

    ``func`` must accept arrays (or scalars) for both arguments. ``bounds_on``
    returns analytically valid derivative bounds on any rectangle
    [0, c] x [0, d]; catalog entries provide it, parsed expressions do not.
    """

    func: Callable
    name: str = "f"
    source: Optional[str] = None
    domain: Optional[Rect] = None
    growth: Optional[Growth] = None
    bounds_on: Optional[Callable[[Rect], FunctionBounds]] = None

    def __call__(self, x, y) -> float:
        return float(self.grid(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))

    def grid(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        with np.errstate(all="ignore"):
            values = np.asarray(self.func(xs, ys), dtype=float)
        values = np.broadcast_to(values, np.broadcast(xs, ys).shape)
        bad = ~np.isfinite(values)
        if bad.any():
            idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
            px = float(np.broadcast_to(xs, bad.shape)[idx])
            py = float(np.broadcast_to(ys, bad.shape)[idx])
            raise DomainError(f"{self.name} is not finite at ({px!r}, {py!r})")
        return values

    @property
    def metadata(self) -> Optional[FunctionBounds]:
        """Bounds on the declared domain, when both are known."""
        if self.bounds_on is None or self.domain is None:
            return None
        return self.bounds_on(self.domain)

    def with_growth(self, growth: Optional[Growth]) -> "BivariateFunction":
        return BivariateFunction(self.func, self.name, self.source, self.domain, growth, self.bounds_on)


def as_function(f, growth: Optional[Growth] = None, name: str = "f") -> BivariateFunction:
    """Wrap a plain callable; BivariateFunction instances pass through."""
    if isinstance(f, BivariateFunction):
        return f
    return BivariateFunction(f, name=getattr(f, "__name__", name), growth=growth)
