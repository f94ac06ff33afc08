"""Exception types raised across the package."""


class NeedletError(Exception):
    """Base class for all package errors."""


class DomainError(NeedletError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(NeedletError, ValueError):
    """Inputs are individually valid but insufficient for the requested accuracy."""


class VariantError(NeedletError, ValueError):
    """The operation is only defined for a different filter variant."""


class ResourceLimitError(NeedletError, RuntimeError):
    """The request would exceed a hard size cap."""


class InsufficientRangeError(PreconditionError):
    """A finite level range misses more of the frame energy than allowed."""

    def __init__(self, message: str, leakage: float):
        super().__init__(message)
        self.leakage = leakage
