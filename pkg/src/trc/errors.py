"""Exception types shared across the package."""


class TrcError(Exception):
    """Base class for all package-specific errors."""


class InvalidArguments(TrcError):
    """An argument is outside its documented range (e.g. p > n-1)."""


class DimensionMismatch(TrcError):
    """Shapes of tensors, matrices or subspaces do not line up."""


class DenominatorVanishes(TrcError):
    """A rational cannot be reduced mod q because q divides its denominator."""


class NotSquare(TrcError):
    """A square matrix was required (determinants, block splitting)."""


class OrderMismatch(TrcError):
    """A flattening was built with the wrong basis order for this operation."""


class NotFullRank(TrcError):
    """Certification wanted a full-rank flattening and retries ran out.

    The partial certificate (with the bound actually achieved) is attached
    as ``certificate`` so callers can still emit it.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class IdenticallyZeroWitness(TrcError):
    """A support search never saw a nonzero value; the input may be zero."""


class SweepViolation(TrcError):
    """A soundness sweep found a lower bound exceeding a known rank.

    Carries ``repro`` with everything needed to rebuild the failing trial.
    """

    def __init__(self, message, repro=None):
        super().__init__(message)
        self.repro = repro
