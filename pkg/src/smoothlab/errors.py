"""Exception types shared across the package."""


class SmoothlabError(ValueError):
    """Base class for all input / regime errors."""


class ParameterError(SmoothlabError):
    """Malformed or out-of-range input (bad exponent, bad grid, ...)."""


class AdmissibilityError(SmoothlabError):
    """Fractional order not admissible for the requested integrability."""


class HypothesisError(SmoothlabError):
    """Check requested outside the regime where the statement holds."""


class RegimeError(HypothesisError):
    """Parameter combination matches no known rate regime."""
