"""Exception types raised across bohrkit."""


class BohrError(Exception):
    """Base class for all errors raised by this package."""


class BoundExceeded(BohrError, ValueError):
    """An integer has a prime factor beyond the prime table."""


class IndexOverflow(BohrError, OverflowError):
    """Exact integer result exceeds the configured limit."""


class UnsortedInput(BohrError, ValueError):
    pass


class HorizonTooSmall(BohrError, ValueError):
    pass


class BadBase(BohrError, ValueError):
    """Counterexample base fails the summability condition."""


class DegenerateDegree(BohrError, ValueError):
    pass


class DimensionMismatch(BohrError, ValueError):
    pass


class PreconditionViolation(BohrError, ValueError):
    pass


class ParseError(BohrError, ValueError):
    """Malformed input file; ``location`` names the offending line/field."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
