"""Exception hierarchy shared by all noisebudget modules.

ParameterError covers invalid inputs and malformed configuration (CLI exit
code 2); DomainError covers configurations the model rejects, such as
measuring at a divergent quadrature or off-resonance probing where a formula
assumes a resonant probe (CLI exit code 3).
"""


class NoiseBudgetError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(NoiseBudgetError, ValueError):
    """A parameter or configuration value is out of range or malformed."""


class DomainError(NoiseBudgetError):
    """The requested evaluation is outside the model's domain."""


class DivergenceError(DomainError):
    """The requested configuration has a divergent result (e.g. phi = 0)."""


class UnsupportedConfigError(DomainError):
    """A formula precondition (e.g. resonant probe, Delta = 0) is violated."""


class BranchPoleError(DomainError):
    """Evaluation exactly at the synodyne branch-crossover pole."""


class NonphysicalAsymmetryError(DomainError):
    """Sideband amplitudes imply a negative or infinite occupation."""


class NoPeakError(DomainError):
    """Spectrum data contains no resolvable peak to fit."""


class GridRangeError(DomainError):
    """A requested frequency lies outside the evaluation grid."""


class FitConvergenceError(DomainError):
    """Iterative fit did not converge; carries the best fit found so far."""

    def __init__(self, message, best_fit=None, residual_rms=None):
        super().__init__(message)
        self.best_fit = best_fit
        self.residual_rms = residual_rms
