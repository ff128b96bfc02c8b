"""Exception hierarchy shared by all modules."""


class GPLabError(Exception):
    """Base class for library errors."""


class ConfigError(GPLabError, ValueError):
    """Invalid user-supplied configuration."""


class DomainError(GPLabError, ValueError):
    """Argument outside the mathematical domain of a function."""


class DivergentIntegralError(DomainError):
    """A closed-form integral whose convergence conditions fail."""


class SingularMatrixError(GPLabError, ArithmeticError):
    """Linear system could not be solved to the required residual."""


class NumericalFailure(GPLabError, ArithmeticError):
    """A numerical procedure failed to meet its contract."""


class IntegrationError(NumericalFailure):
    """Adaptive integrator underflowed its step size or ran out of steps.

    Attributes
    ----------
    r : float
        Radius at which the integrator gave up.
    """

    def __init__(self, message, r=float("nan")):
        super().__init__(message)
        self.r = r


class NoSolution(NumericalFailure):
    """No positive decaying solution exists for the requested parameters."""


class NoBracket(NumericalFailure):
    """Event types do not separate on the search interval.

    Attributes
    ----------
    scan : list of tuple
        ``(parameter, event)`` pairs sampled while looking for a bracket.
    """

    def __init__(self, message, scan=()):
        super().__init__(message)
        self.scan = list(scan)


class NormalizationError(NumericalFailure):
    """Green-function normalization did not converge."""


class ExpansionError(NumericalFailure):
    """Near-origin expansion is not valid at the requested start radius."""


class PivotBreakdownWarning(RuntimeWarning):
    """A zero pivot was perturbed during Sturm counting."""
