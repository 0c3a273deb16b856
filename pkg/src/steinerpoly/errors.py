"""Exception hierarchy shared by all modules."""


class SteinerError(Exception):
    """Base class for errors raised by steinerpoly."""


class PreconditionError(SteinerError, ValueError):
    """An operation was called with inputs violating its contract."""


class UnsupportedBodyError(SteinerError, TypeError):
    """The body lacks the smoothness or structure an operation needs."""


class SummandViolationError(PreconditionError):
    """The summand condition needed for a Minkowski difference failed.

    Attributes
    ----------
    margin : float
        Global smallest radius of the outer body minus global largest radius of
        the would-be summand. Negative when this error is raised.
    """

    def __init__(self, message, margin):
        super().__init__(message)
        self.margin = margin


class NumericalError(SteinerError, ArithmeticError):
    """An iterative numerical procedure failed to converge."""


class IntegrationError(SteinerError, ArithmeticError):
    """An integrand failed or returned a non-finite value at a node."""
