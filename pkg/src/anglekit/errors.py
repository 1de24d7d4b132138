"""Exception types shared across the package."""


class AngleKitError(Exception):
    """Base class for anglekit failures."""


class DataValidationError(AngleKitError):
    """A dataset failed validation: bad labels, non-finite or non-numeric values."""


class InsufficientDataError(AngleKitError):
    """Too few observations for the requested operation."""


class DegenerateDerivativeError(AngleKitError):
    """A loss derivative is zero or non-finite where its inverse is needed."""


class ModelFormatError(AngleKitError):
    """A persisted model document is malformed or has the wrong version."""
