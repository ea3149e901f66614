"""Exception types shared by every module."""


class SpectrakitError(Exception):
    pass


class DomainError(SpectrakitError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(SpectrakitError, RuntimeError):
    """A configured size cap would be exceeded."""


class IntegralityError(SpectrakitError, ArithmeticError):
    """A quantity that must be an integer came out fractional.

    This always indicates a bug, never bad input.
    """
