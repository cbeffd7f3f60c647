"""Exception types shared across the package."""


class GembenchError(Exception):
    """Base class for all gembench errors."""


class ValidationError(GembenchError, ValueError):
    """An input violates a documented precondition or invariant."""


class ParseError(ValidationError):
    """A text input (edge list, manifest, config) could not be parsed."""


class BoundsError(ValidationError):
    """An index or size argument is out of range."""


class CapacityError(ValidationError):
    """A generator cannot satisfy the requested output size."""


class NumericError(GembenchError, ArithmeticError):
    """A numeric routine diverged, overflowed, or failed to converge."""
