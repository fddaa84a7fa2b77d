"""Expression language for user-supplied f(x, y).

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' factor)?
    unary  := '-' unary | atom
    atom   := NUMBER | 'x' | 'y' | 'pi' | 'e' | IDENT '(' expr ')' | '(' expr ')'

Binary operators are parsed by precedence climbing; ``^`` is right
associative and its base is a unary expression, so ``-2^2`` is ``(-2)^2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import DomainError, ParseError


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # 'x' or 'y'


@dataclass(frozen=True)
class Const:
    name: str  # 'pi' or 'e'


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLES = ("x", "y")

# (precedence, right associative)
_BINARY = {"+": (1, False), "-": (1, False), "*": (2, False), "/": (2, False), "^": (3, True)}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_OPERAND_START = frozenset({"NUMBER", "x", "y", "pi", "e", "(", "-"} | set(FUNCTIONS))


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'num', 'ident', 'op', 'eof'
    text: str
    offset: int  # byte offset


def _tokenize(source: str):
    tokens = []
    pos = 0
    byte = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", byte, _OPERAND_START)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Tok(kind, m.group(), byte))
        byte += len(m.group().encode("utf-8"))
        pos = m.end()
    tokens.append(_Tok("eof", "", byte))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def advance(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.tok
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.offset, expected)

    def after_operand(self):
        expected = set(_BINARY) | {"end of input"}
        if self.depth:
            expected.add(")")
        return expected

    def close_paren(self):
        if self.tok.kind == "op" and self.tok.text == ")":
            self.depth -= 1
            return self.advance()
        self.fail(self.after_operand())

    def parse(self) -> Expr:
        node = self.binary(1)
        if self.tok.kind != "eof":
            self.fail(self.after_operand())
        return node

    def binary(self, min_prec: int) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in _BINARY:
            op = self.tok.text
            prec, right_assoc = _BINARY[op]
            if prec < min_prec:
                break
            self.advance()
            right = self.binary(prec if right_assoc else prec + 1)
            left = BinOp(op, left, right)
        return left

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            if tok.text in VARIABLES:
                self.advance()
                return Var(tok.text)
            if tok.text in CONSTANTS:
                self.advance()
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                self.advance()
                if not (self.tok.kind == "op" and self.tok.text == "("):
                    self.fail({"("})
                self.advance()
                self.depth += 1
                arg = self.binary(1)
                self.close_paren()
                return Call(tok.text, arg)
            self.fail(_OPERAND_START)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            self.depth += 1
            node = self.binary(1)
            self.close_paren()
            return node
        self.fail(_OPERAND_START)


def parse(source: str) -> Expr:
    """Parse ``source`` into an AST; raises ParseError on any syntax error."""
    if not source or not source.strip():
        raise ParseError("empty expression", len(source.encode("utf-8")), _OPERAND_START)
    return _Parser(source).parse()


# --- printing --------------------------------------------------------------

_LEVEL_UNARY = 4
_LEVEL_ATOM = 5


def _level(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _BINARY[node.op][0]
    if isinstance(node, Neg):
        return _LEVEL_UNARY
    return _LEVEL_ATOM


def to_source(node: Expr, context: int = 0) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""
    if isinstance(node, Num):
        text = repr(float(node.value))
    elif isinstance(node, (Var, Const)):
        text = node.name
    elif isinstance(node, Call):
        text = f"{node.func}({to_source(node.arg)})"
    elif isinstance(node, Neg):
        text = "-" + to_source(node.operand, _LEVEL_UNARY)
    elif isinstance(node, BinOp):
        prec, right_assoc = _BINARY[node.op]
        if node.op == "^":
            left = to_source(node.left, _LEVEL_UNARY)
            right = to_source(node.right, prec)
            text = f"{left}^{right}"
        else:
            left = to_source(node.left, prec)
            right = to_source(node.right, prec + 1)
            text = f"{left} {node.op} {right}"
    else:
        raise TypeError(f"not an expression node: {node!r}")
    if _level(node) < context:
        return f"({text})"
    return text


# --- evaluation --------------------------------------------------------------


def _domain(msg):
    raise DomainError(msg)


def _checked(func, name):
    def call(v):
        try:
            out = func(v)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{name}({v!r}): {exc}") from None
        return out

    return call


_SCALAR_FUNCS = {
    "sin": _checked(math.sin, "sin"),
    "cos": _checked(math.cos, "cos"),
    "exp": _checked(math.exp, "exp"),
    "log": lambda v: math.log(v) if v > 0 else _domain(f"log of nonpositive value {v!r}"),
    "sqrt": lambda v: math.sqrt(v) if v >= 0 else _domain(f"sqrt of negative value {v!r}"),
}


def _scalar(node: Expr, x: float, y: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else y
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_scalar(node.operand, x, y)
    if isinstance(node, Call):
        return _SCALAR_FUNCS[node.func](_scalar(node.arg, x, y))
    a = _scalar(node.left, x, y)
    b = _scalar(node.right, x, y)
    try:
        if node.op == "+":
            out = a + b
        elif node.op == "-":
            out = a - b
        elif node.op == "*":
            out = a * b
        elif node.op == "/":
            out = a / b
        else:
            out = math.pow(a, b)
    except ZeroDivisionError:
        raise DomainError(f"division by zero in {to_source(node)}") from None
    except (ValueError, OverflowError) as exc:
        raise DomainError(f"{to_source(node)}: {exc}") from None
    if not math.isfinite(out):
        raise DomainError(f"{to_source(node)} is not finite")
    return out


def evaluate(expr: Expr, point) -> float:
    """Evaluate at a point (anything with .x and .y, or an (x, y) pair)."""
    x, y = (point.x, point.y) if hasattr(point, "x") else point
    return _scalar(expr, float(x), float(y))


_ARRAY_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "log": np.log, "sqrt": np.sqrt}
_ARRAY_OPS = {"+": np.add, "-": np.subtract, "*": np.multiply, "/": np.divide, "^": np.power}


def _array(node: Expr, x, y):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x if node.name == "x" else y
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return np.negative(_array(node.operand, x, y))
    if isinstance(node, Call):
        arg = _array(node.arg, x, y)
        if node.func == "log":
            arg = np.where(np.asarray(arg) > 0, arg, np.nan)
        return _ARRAY_FUNCS[node.func](arg)
    return _ARRAY_OPS[node.op](_array(node.left, x, y), _array(node.right, x, y))


def compile_numpy(expr: Expr):
    """Vectorized evaluator; invalid operations yield non-finite values.

    Wrapped in a BivariateFunction, non-finite values become DomainError.
    """

    def func(x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(_array(expr, x, y), dtype=float)
        # constant subexpressions come back as scalars
        return np.broadcast_to(out, np.broadcast(x, y).shape).copy()

    return func
