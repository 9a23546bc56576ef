"""Typed exceptions shared across the package."""


class QGHarmError(Exception):
    """Base class for all errors raised by qgharm."""


class LabelMismatchError(QGHarmError, ValueError):
    """An irreducible label does not belong to the given group."""


class ExponentRangeError(QGHarmError, ValueError):
    """A norm or interpolation exponent is outside its admissible range."""


class NotPolynomialGrowthError(QGHarmError, ValueError):
    """Operation requires a polynomially growing dual."""


class NoClassicalModelError(QGHarmError, ValueError):
    """No classical (SU(2)/SO(3)) model exists for this group's central elements."""


class UnsupportedGroupError(QGHarmError, ValueError):
    """The requested battery does not cover this group."""


class BallSizeExceededError(QGHarmError, ValueError):
    """A free-group ball enumeration would exceed the size guard."""

    def __init__(self, message, size):
        super().__init__(message)
        self.size = size


class PowerIterationError(QGHarmError, RuntimeError):
    """Power iteration failed to converge; carries the last two estimates."""

    def __init__(self, message, last_two):
        super().__init__(message)
        self.last_two = tuple(last_two)


class InterpolationRelationError(QGHarmError, ValueError):
    """Interpolation parameters violate (1-theta)/p0 + theta/p1 = 1/p."""
