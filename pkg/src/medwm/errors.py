"""Exception types raised across the package."""


class WatermarkError(Exception):
    """Base class for all package errors."""


class InvalidInputError(WatermarkError, ValueError):
    """Input data or parameters violate an operation's preconditions."""


class ConvergenceError(WatermarkError, RuntimeError):
    """An iterative kernel failed to converge within its sweep cap."""


class WrongKeyError(WatermarkError):
    """A watermark key does not belong to the requested scheme."""


class UndefinedCorrelationError(WatermarkError, ValueError):
    """Normalized correlation requested for an all-zero input."""


class ImageFormatError(WatermarkError):
    """Malformed or unsupported image file.

    ``offset`` is the byte offset of the offending data when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class PayloadLengthError(ImageFormatError):
    """Pixel payload shorter or longer than the header promises."""

    def __init__(self, expected, actual, offset=None):
        super().__init__(
            f"payload length mismatch: expected {expected} bytes, got {actual}",
            offset,
        )
        self.expected = expected
        self.actual = actual


class UnsupportedImageError(ImageFormatError):
    """Valid image file with a bit depth or color space we do not handle."""


class KeyFormatError(WatermarkError):
    """Corrupt or truncated key file."""


class ImageNotFoundError(WatermarkError, FileNotFoundError):
    """Input image path does not exist."""
