"""Exception types shared across the package."""


class VbesovError(Exception):
    """Base class for all package errors."""


class ParameterError(VbesovError):
    """Invalid argument: bad grid size, mismatched grids, NaN input, ..."""


class AdmissibilityError(ParameterError):
    """An exponent field violates its admissibility class (e.g. p < 1)."""


class UnsupportedFeatureError(VbesovError):
    """Requested a regime that is a declared non-goal (e.g. q+ = infinity)."""


class ConstructionError(VbesovError):
    """A built object failed its own certification (frame residual, Tauberian bound)."""


class HypothesisViolationError(VbesovError):
    """Inputs violate a theorem hypothesis that the operation requires."""
