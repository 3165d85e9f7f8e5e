"""Exception hierarchy for cvwerner."""


class CvWernerError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(CvWernerError):
    """Operands have incompatible matrix dimensions."""


class HermiticityError(CvWernerError):
    """A matrix required to be Hermitian is not, within tolerance."""


class CutoffTooSmallError(CvWernerError):
    """The Fock cutoff cannot hold the requested state within its tail bound."""

    def __init__(self, message, minimal_n_max=None):
        super().__init__(message)
        self.minimal_n_max = minimal_n_max


class ParameterRangeError(CvWernerError):
    """State parameters are outside the supported desk-scale range."""


class ConvergenceError(CvWernerError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NumericalConsistencyError(CvWernerError):
    """Two computations that must agree disagreed beyond tolerance."""


class DomainTooSmallError(CvWernerError):
    """A quadrature grid does not cover the integrand's effective support."""
