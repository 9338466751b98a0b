"""Exception types raised across limitlab."""


class LimitlabError(Exception):
    """Base class for all limitlab errors."""


class PreconditionError(LimitlabError, ValueError):
    """An operation was called on inputs outside its domain."""


class DegenerateInputError(PreconditionError):
    """Zero variance, zero absolute mean, or a zero scale factor."""


class UnsupportedKindError(LimitlabError, ValueError):
    """No exact algorithm exists for this kind of distribution."""


class AtomCapExceeded(LimitlabError, ValueError):
    """An exact atomic sum would exceed the configured atom budget."""


class UncertifiableError(LimitlabError, ValueError):
    """A sup-norm cannot be certified without a Lipschitz bound."""


class CertificationError(LimitlabError, ArithmeticError):
    """Numerical error could not be driven below the requested bound.

    ``achieved`` carries the best error bound reached before giving up.
    """

    def __init__(self, message, achieved=float("inf")):
        super().__init__(message)
        self.achieved = achieved
