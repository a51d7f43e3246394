"""Exception hierarchy shared by every summation method."""


class SummaError(Exception):
    """Base class for all errors raised by :mod:`summa`."""


class DomainError(SummaError, ValueError):
    """Input lies outside the domain of the requested operation."""


class PoleError(SummaError, ZeroDivisionError):
    """The generating expression has a pole at the requested point."""


class LengthError(SummaError, IndexError):
    """Not enough terms or levels to honour the request."""


class UnclassifiedSeries(SummaError):
    """Genus probe was inconclusive; no guess is made."""


class BreakdownError(SummaError, ArithmeticError):
    """An algorithm hit a zero pivot or a degenerate map.

    ``level`` is the recursion level (0-based) where it happened, when known.
    """

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class BracketError(SummaError, ValueError):
    """Root bracket does not contain a sign change."""


class QuadratureError(SummaError, ArithmeticError):
    """Requested tolerance is out of reach at the working precision."""
