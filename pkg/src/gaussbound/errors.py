"""Exception types raised across the package."""


class GaussboundError(Exception):
    """Base class for all errors raised by gaussbound."""


class InvalidArgumentError(GaussboundError, ValueError):
    """An argument has the wrong shape, size or kind."""


class DomainError(GaussboundError, ValueError):
    """A scalar argument lies outside the domain of a function.

    ``mode`` is the index of the offending mode when the failure can be
    attributed to one.
    """

    def __init__(self, message, mode=None):
        super().__init__(message)
        self.mode = mode


class NotPositiveDefiniteError(GaussboundError, ValueError):
    """A matrix expected to be positive definite is not.

    ``pivot`` is the zero-based index of the first failing Cholesky pivot,
    when known.
    """

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class NumericalDegeneracyError(GaussboundError, ArithmeticError):
    """Eigenvalues could not be paired or a computation went non-finite."""


class DecompositionError(GaussboundError, ArithmeticError):
    """A Williamson decomposition failed its reconstruction checks."""


class BonaFideError(GaussboundError, ValueError):
    """A covariance matrix violates the uncertainty principle or is malformed.

    ``diagnostics`` holds one human-readable line per violated invariant.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class TailMassError(GaussboundError, ValueError):
    """A Fock truncation cannot hold the state to the requested tail mass."""


class UnsupportedPairError(GaussboundError, ValueError):
    """The requested computation is not available for this pair of states."""


class InvariantViolationError(GaussboundError, AssertionError):
    """A bound report failed one of its ordering checks."""


class ReportError(GaussboundError):
    """One or more bounds in a report could not be computed.

    ``failures`` maps each bound name to the exception it raised.
    """

    def __init__(self, failures):
        self.failures = dict(failures)
        super().__init__(
            "; ".join(f"{name}: {exc}" for name, exc in self.failures.items())
        )
