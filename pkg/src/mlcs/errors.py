"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to reach the requested tolerance.

    Carries the partial result (when one exists) so callers can inspect
    how far the evaluation got.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RouteMismatchError(RuntimeError):
    """Two independent evaluation routes disagree beyond tolerance."""

    def __init__(self, message, first, second):
        super().__init__(message)
        self.first = first
        self.second = second


class TruncationOverflowError(RuntimeError):
    """A ladder operation would push weight past the truncation window."""
