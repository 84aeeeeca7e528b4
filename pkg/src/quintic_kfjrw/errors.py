"""Exception hierarchy shared by all modules."""


class KFJRWError(Exception):
    """Base class for every error raised by this package."""


class LevelMismatch(KFJRWError, ValueError):
    """Operands live over different cyclotomic levels or different roots of q."""


class LevelNotDivisible(KFJRWError, ValueError):
    pass


class NotDivisible(KFJRWError, ValueError):
    pass


class DivisionByZero(KFJRWError, ZeroDivisionError):
    pass


class OrderMismatch(KFJRWError, ValueError):
    """The root of unity xi0 does not have xi0**r of the requested order."""


class NonPolynomialCoefficient(KFJRWError, ValueError):
    pass


class ExpansionAtEssential(KFJRWError, ValueError):
    """Reserved: rational functions never have essential singularities."""


class TruncationTooShort(KFJRWError, ValueError):
    pass


class UnsupportedRank(KFJRWError, ValueError):
    pass


class PoleAtSample(KFJRWError, ValueError):
    pass


class NonConvergent(KFJRWError, ValueError):
    pass


class DSLSyntaxError(KFJRWError, SyntaxError):
    """Parse failure carrying a line:column position and the expected tokens."""

    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{line}:{column}: {message}"
        if self.expected:
            detail += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class UnknownAtom(DSLSyntaxError):
    pass
