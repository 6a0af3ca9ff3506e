"""Exception hierarchy shared by every layer of the package."""


class AffnormError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class RingMismatchError(AffnormError, ValueError):
    """Operands live in different rings."""


class MonomialOverflowError(AffnormError, ArithmeticError):
    """An exponent exceeded the packed field width."""

    exit_code = 3


class CapExceededError(AffnormError):
    """A configured computation cap (degree, iterations, minors, trials) was hit."""

    exit_code = 3


class InvariantViolationError(AffnormError):
    """An internal consistency check failed; indicates a bug or bad input."""

    exit_code = 4


class NotReducedError(InvariantViolationError):
    """The input ring is not reduced (its defining ideal is not radical)."""


class InexactDivisionError(InvariantViolationError):
    """An exact polynomial division left a nonzero remainder."""


class SyntaxErrorWithPosition(AffnormError):
    """Session text could not be parsed."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
