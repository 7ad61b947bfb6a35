"""Exception hierarchy shared by all forestmetric modules."""


class ForestMetricError(Exception):
    """Base class for every error raised by forestmetric."""


class ParseError(ForestMetricError, ValueError):
    """Malformed edge-list input. ``line`` is 1-based, or None for file-level problems."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(ForestMetricError, ValueError):
    """An argument lies outside the domain of the operation (alpha <= 0, i == j, ...)."""


class SizeGuardError(DomainError):
    """Brute-force enumeration refused because the graph is too large."""


class NumericalGuardError(ForestMetricError, ArithmeticError):
    """A quantity that must be nonzero for valid input came out (numerically) zero."""


class PropertyViolation(ForestMetricError, AssertionError):
    """A structural identity or bound failed beyond the requested tolerance."""
