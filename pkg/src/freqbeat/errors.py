"""Exception types shared across the package."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to reach the requested tolerance."""


class NonIdentifiableError(RuntimeError):
    """The likelihood carries no information about the delay (e.g. nu = 0 data)."""


class UnboundedVarianceError(ValueError):
    """Cramer-Rao bound requested for zero Fisher information."""
