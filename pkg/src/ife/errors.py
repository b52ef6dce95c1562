"""Typed errors raised by validation and I/O."""


class IfeError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(IfeError):
    """Value buffer length does not match the declared shape."""


class NonFiniteValue(IfeError):
    """A NaN or Inf was found where only finite floats are allowed."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"non-finite value at flat index {index}")


class TooSmall(IfeError):
    """Spatial dimensions below the minimum the operation supports."""


class IndexOutOfRange(IfeError):
    """Channel index outside [0, C)."""


class DuplicateIndex(IfeError):
    """A channel index appears more than once in a selection."""


class ShapeMismatch(IfeError):
    """Two maps being compared have different shapes."""


class BadMagic(IfeError):
    """File does not start with a supported array-format magic/version."""


class UnsupportedDType(IfeError):
    """Array file element type outside {little-endian f32, f64}."""


class UnsupportedRank(IfeError):
    """Array file rank is neither 2 nor 3."""


class ColumnMajorUnsupported(IfeError):
    """Array file declares Fortran (column-major) storage order."""


class UnsupportedColorType(IfeError):
    """PNG color type outside 8/16-bit grayscale or 8-bit RGB."""


class DecodeError(IfeError):
    """File failed to decode as a PNG image."""
