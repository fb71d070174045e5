"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates its contract (bad kernel size, bounds, ...)."""


class DimensionError(ValueError):
    """Two fields that must share a shape do not."""


class DegenerateImageError(RuntimeError):
    """The input image cannot be segmented (e.g. constant intensity)."""


class ImageFormatError(Exception):
    """An image file is corrupt or uses an unsupported encoding."""
