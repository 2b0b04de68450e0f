"""Exception types shared across the package."""


class SumRankError(Exception):
    """Base class for all errors raised by this package."""


class NotAPrimePower(SumRankError, ValueError):
    """The requested field order is not a prime power (or is < 2)."""


class DivisionByZero(SumRankError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class FieldTooLarge(SumRankError, ValueError):
    """The field order exceeds what the requested representation supports."""


class InvalidDimension(SumRankError, ValueError):
    """Dimension arguments violate the preconditions of a counting formula."""


class PartitionMismatch(SumRankError, ValueError):
    """An ordered partition does not sum to the matrix column count."""


class BudgetExceeded(SumRankError, RuntimeError):
    """An exhaustive enumeration would exceed the configured point budget."""


class DegenerateCondition(SumRankError, ArithmeticError):
    """A conditional probability was requested on an empty condition."""
