"""Exception types shared across the package."""


class TransmuteError(Exception):
    """Base class for every error raised by this library."""


class ExpressionError(TransmuteError):
    """Problem with the coefficient DSL (parsing or evaluation)."""


class ParseError(ExpressionError):
    """Syntax error in an expression string.

    Carries the byte offset into the source text and, when known, a hint
    about what the parser expected at that position.
    """

    def __init__(self, message, offset, expected=None):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnboundSymbolError(ExpressionError):
    """An identifier had no entry in the binding map."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound symbol {name!r}")


class DomainError(TransmuteError):
    """Evaluation left the mathematical domain (log of a non-positive
    number, fractional power of a negative base, |x|' at 0, ...).

    Raised instead of letting NaN or inf propagate.
    """


class SpecFunError(TransmuteError):
    """Base class for special-function failures."""


class PoleError(SpecFunError):
    """Argument sits on a pole of the function."""


class RangeError(SpecFunError):
    """Argument outside the supported accuracy box."""


class ConvergenceError(SpecFunError):
    """An iteration or series failed to converge within its cap."""


class AdmissibilityError(TransmuteError):
    """Case parameters violate a stated admissibility constraint."""

    def __init__(self, constraint, detail=""):
        self.constraint = constraint
        msg = f"{constraint} violated"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UsageError(TransmuteError):
    """Bad configuration or command-line usage."""


class NumericalError(TransmuteError):
    """A numerical pipeline produced a non-finite value or failed wholesale."""
