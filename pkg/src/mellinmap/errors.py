"""Exception hierarchy shared by the numerical modules."""


class MellinMapError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MellinMapError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PoleError(DomainError):
    """Evaluation requested too close to a pole of a moment kernel."""

    def __init__(self, message, distance):
        super().__init__(message)
        self.distance = distance


class IterationError(MellinMapError, ArithmeticError):
    """An iterative solver stopped before meeting its residual target."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class IntegrationError(MellinMapError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class TruncationError(MellinMapError, ArithmeticError):
    """A series did not converge within its term budget."""

    def __init__(self, message, partial_sum, terms_used):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms_used = terms_used


class ContractError(MellinMapError, TypeError):
    """An object of the wrong kind was passed (e.g. the wrong contour type)."""
