"""Base-a Szasz-Mirakjan operators, their generalized Boolean sums and comparators."""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    InvalidParameters,
    ParseError,
    SzaszError,
    TruncationFailure,
    UnknownFunction,
    UnsupportedOrder,
)
from .function import BivariateFunction, FunctionBounds, Growth, as_function
from .kernel import (
    DEFAULT_POLICY,
    Axis,
    ClassicalParams,
    OperatorParams,
    Point2,
    Rect,
    SummationWindow,
    TruncationPolicy,
    expectation,
    truncation_window,
    weight,
)
from .operators import (
    OperatorKind,
    QuadratureSpec,
    eval_bivariate,
    eval_gbs,
    eval_kantorovich,
    eval_mfs,
    eval_mfs_gbs,
    evaluate,
)
from .funcparser import catalog, function_from_source, parse

__all__ = [
    "Axis", "BivariateFunction", "ClassicalParams", "DEFAULT_POLICY", "DomainError", "FunctionBounds", "Growth",
    "InvalidParameters", "OperatorKind", "OperatorParams", "ParseError", "Point2", "QuadratureSpec", "Rect",
    "SummationWindow", "SzaszError", "TruncationFailure", "TruncationPolicy", "UnknownFunction", "UnsupportedOrder",
    "as_function", "catalog", "eval_bivariate", "eval_gbs", "eval_kantorovich", "eval_mfs", "eval_mfs_gbs",
    "evaluate", "expectation", "function_from_source", "parse", "truncation_window", "weight",
]
