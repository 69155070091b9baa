"""Exception hierarchy shared by every module of the package."""


class ModelError(ValueError):
    """Base class for all errors raised by :mod:`lgallee`."""

    exit_code = 10


class ParameterError(ModelError):
    """A parameter set violates its invariants (sign, range, ordering)."""

    exit_code = 3


class DomainError(ModelError):
    """A state lies outside the region where the model is defined (x <= 0)."""

    exit_code = 4


class ExistenceError(ModelError):
    """The requested degenerate point does not exist for these parameters."""

    exit_code = 5


class ClassificationError(ModelError):
    """Inconsistent input to the classifier or to a normal-form branch."""

    exit_code = 6


class IntegrationError(ModelError):
    """Step-size underflow during numerical integration.

    The last accepted state is kept on the exception so callers can report it.
    """

    exit_code = 7

    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state
