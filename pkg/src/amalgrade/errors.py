"""Exception hierarchy shared by every layer."""


class AmalgradeError(Exception):
    """Base class for all structured errors raised by the package."""


class AmbientMismatch(AmalgradeError):
    """Operands live in different rings, fields or free modules."""


class ZeroPolynomialError(AmalgradeError):
    """An operation needing a nonzero polynomial received zero."""


class ResourceError(AmalgradeError):
    """The Groebner step budget was exhausted."""


class NotDecidable(AmalgradeError):
    """The input is outside the fragment where an exact answer is certified."""


class InvalidInput(AmalgradeError):
    """Precondition or invariant violation in user-supplied data."""


class ParseError(AmalgradeError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{line}:{column}: {message}" if line else message)
