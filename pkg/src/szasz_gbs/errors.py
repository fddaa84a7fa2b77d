"""Exception hierarchy shared by the engine, parser and CLI."""


class SzaszError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameters(SzaszError, ValueError):
    """Operator parameters or policies violate their invariants."""


class TruncationFailure(SzaszError):
    """The summation window hit ``max_terms`` before the tail was certified."""


class DomainError(SzaszError, ArithmeticError):
    """A function could not be evaluated at a required point."""


class UnsupportedOrder(SzaszError, ValueError):
    """No closed form exists for the requested moment order."""


class UnknownFunction(SzaszError, KeyError):
    """Catalog lookup for a name that is not registered."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown function"


class ParseError(SzaszError, ValueError):
    """Syntax error in a function expression.

    ``offset`` is the byte offset into the source where parsing stopped and
    ``expected`` the set of tokens that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at offset {offset}" + (f" (expected one of: {exp})" if exp else ""))
