"""Exception types shared across the package."""


class HypocertError(Exception):
    """Base class for all package errors."""


class EvaluationError(HypocertError):
    """A model callable produced a non-finite or malformed value."""


class EllipticityError(HypocertError):
    """A diffusion matrix failed positive definiteness.

    Carries the offending point and the pivot index where the Cholesky
    factorization broke down.
    """

    def __init__(self, message, point=None, pivot=None):
        super().__init__(message)
        self.point = point
        self.pivot = pivot


class AssumptionError(HypocertError):
    """A declared hypothesis was violated at a probe point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NumericsError(HypocertError):
    """An eigensolve or linear solve failed to reach its tolerance."""


class CertificateError(HypocertError):
    """Internal inconsistency in the rate-certificate algebra."""


class ConfigError(HypocertError):
    """An experiment configuration failed to parse or validate."""


class BlowUpError(HypocertError):
    """An SDE path left the finite range.

    Carries the first offending path index and the simulation time.
    """

    def __init__(self, message, path_index=None, time=None):
        super().__init__(message)
        self.path_index = path_index
        self.time = time
