"""User-defined functions: expression parsing and the example catalog."""

from ..function import BivariateFunction, FunctionBounds, Growth
from .catalog import CATALOG_NAMES, catalog
from .expr import BinOp, Call, Const, Expr, Neg, Num, Var, compile_numpy, evaluate, parse, to_source


def function_from_source(source: str, growth=None) -> BivariateFunction:
    """Parse ``source`` and wrap it as a vectorized BivariateFunction.

    Growth is unknown for arbitrary expressions, so by default sums over it
    use the stabilization doublings.
    """
    return BivariateFunction(compile_numpy(parse(source)), name=source, source=source, growth=growth)


__all__ = [
    "BinOp", "BivariateFunction", "CATALOG_NAMES", "Call", "Const", "Expr", "FunctionBounds", "Growth",
    "Neg", "Num", "Var", "catalog", "compile_numpy", "evaluate", "function_from_source", "parse", "to_source",
]
