"""Exception types shared across the package."""


class EntropyBoundsError(Exception):
    """Base class for all errors raised by this package."""


class InputError(EntropyBoundsError, ValueError):
    """An argument is outside the domain of the operation."""


class ModelError(EntropyBoundsError, ValueError):
    """A source description is not a valid probability model."""


class CapacityError(EntropyBoundsError, RuntimeError):
    """Exact enumeration would exceed a fixed size limit."""
