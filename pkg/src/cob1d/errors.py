"""Exception types shared across the package."""


class ResourceLimitError(ValueError):
    """Requested size exceeds the configured enumeration cap."""


class ConsistencyError(RuntimeError):
    """Two independent computations that must agree did not.

    Raised when an exact division is inexact or when a closed-form value
    disagrees with brute-force elimination. Never a recoverable state.
    """
