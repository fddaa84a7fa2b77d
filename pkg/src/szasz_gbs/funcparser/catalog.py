"""Example test functions with analytic derivative bounds.

Every bound below is a closed-form supremum (or a simple majorant of one) of
the stated derivative on [0, c] x [0, d]; derivations are given inline. They
are true upper bounds, so inequalities checked with them cannot be falsified
by an underestimated modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np
from numpy.polynomial import Polynomial

from ..errors import UnknownFunction
from ..function import BivariateFunction, FunctionBounds, Growth
from ..kernel import Rect

PI = math.pi


def sup_abs_poly(coeffs, c: float) -> float:
    """max |p(x)| over [0, c]; coefficients in increasing degree."""
    p = Polynomial(coeffs)
    candidates = [0.0, c]
    if p.degree() >= 2:
        for r in p.deriv().roots():
            if abs(r.imag) < 1e-12 and 0.0 <= r.real <= c:
                candidates.append(r.real)
    return float(max(abs(p(t)) for t in candidates))


def _x_sin_pi_y(r: Rect) -> FunctionBounds:
    # f_x = sin(pi y), f_y = pi x cos(pi y), f_xy = pi cos(pi y), f_xx = 0
    return FunctionBounds(r, 1.0, PI * r.c, PI, 0.0, r.c)


def _sin_x_plus_y(r: Rect) -> FunctionBounds:
    # every derivative is +-sin or +-cos of x + y
    return FunctionBounds(r, 1.0, 1.0, 1.0, 1.0, 1.0)


def _x2y_xm1_sin2piy(r: Rect) -> FunctionBounds:
    # f = P(x) Q(y), P = x^3 - x^2, Q = y sin(2 pi y)
    # |Q| <= d, |Q'| = |sin + 2 pi y cos| <= 1 + 2 pi d,
    # |Q''| = |4 pi cos - 4 pi^2 y sin| <= 4 pi + 4 pi^2 d
    P, dP, d2P = (0, 0, -1, 1), (0, -2, 3), (-2, 6)
    supP, supdP, supd2P = (sup_abs_poly(q, r.c) for q in (P, dP, d2P))
    Q, dQ, d2Q = r.d, 1 + 2 * PI * r.d, 4 * PI + 4 * PI**2 * r.d
    return FunctionBounds(r, supdP * Q, supP * dQ, supdP * dQ, supd2P * d2Q, supP * Q)


def _x2y_cos_piy(r: Rect) -> FunctionBounds:
    # f = x^2 R(y), R = y cos(pi y); |R| <= d, |R'| = |cos - pi y sin| <= 1 + pi d,
    # |R''| = |2 pi sin + pi^2 y cos| <= 2 pi + pi^2 d
    c, d = r.c, r.d
    return FunctionBounds(r, 2 * c * d, c**2 * (1 + PI * d), 2 * c * (1 + PI * d),
                          2 * (2 * PI + PI**2 * d), c**2 * d)


def _y2_cos_2pix(r: Rect) -> FunctionBounds:
    # f_x = -2 pi y^2 sin, f_y = 2 y cos, f_xy = -4 pi y sin, f_xxyy = -8 pi^2 cos
    d = r.d
    return FunctionBounds(r, 2 * PI * d**2, 2 * d, 4 * PI * d, 8 * PI**2, d**2)


def _exp_x_plus_y(r: Rect) -> FunctionBounds:
    v = math.exp(r.c + r.d)
    return FunctionBounds(r, v, v, v, v, v)


@dataclass(frozen=True)
class _Entry:
    source: str
    func: Callable
    domain: Rect
    growth: Growth
    bounds: Callable[[Rect], FunctionBounds]


_CATALOG: Dict[str, _Entry] = {
    "x_sin_pi_y": _Entry(
        "x*sin(pi*y)", lambda x, y: x * np.sin(np.pi * y), Rect(1, 1), Growth.POLYNOMIAL, _x_sin_pi_y
    ),
    "sin_x_plus_y": _Entry(
        "sin(x+y)", lambda x, y: np.sin(x + y), Rect(1, 1), Growth.BOUNDED, _sin_x_plus_y
    ),
    "x2y_xm1_sin2piy": _Entry(
        "x^2*y*(x-1)*sin(2*pi*y)",
        lambda x, y: x**2 * y * (x - 1) * np.sin(2 * np.pi * y),
        Rect(2, 2),
        Growth.POLYNOMIAL,
        _x2y_xm1_sin2piy,
    ),
    "x2y_cos_piy": _Entry(
        "x^2*y*cos(pi*y)", lambda x, y: x**2 * y * np.cos(np.pi * y), Rect(4, 4), Growth.POLYNOMIAL, _x2y_cos_piy
    ),
    "y2_cos_2pix": _Entry(
        "y^2*cos(2*pi*x)", lambda x, y: y**2 * np.cos(2 * np.pi * x), Rect(4, 4), Growth.POLYNOMIAL, _y2_cos_2pix
    ),
    "exp_x_plus_y": _Entry(
        "exp(x+y)", lambda x, y: np.exp(x + y), Rect(1, 1), Growth.EXPONENTIAL, _exp_x_plus_y
    ),
}

CATALOG_NAMES = tuple(_CATALOG)


def catalog(name: str) -> BivariateFunction:
    """Look up an example function by name."""
    try:
        e = _CATALOG[name]
    except KeyError:
        raise UnknownFunction(f"unknown catalog function {name!r}; known: {', '.join(CATALOG_NAMES)}") from None
    return BivariateFunction(e.func, name=name, source=e.source, domain=e.domain, growth=e.growth,
                             bounds_on=e.bounds)
