"""Errors raised while reading, writing or augmenting episodes."""

from ..errors import BilatError


class EpisodeFormatError(BilatError):
    """Base class for malformed episode files."""


class BadMagicError(EpisodeFormatError):
    """The file does not start with the episode magic bytes."""

    def __init__(self, path, found: bytes):
        self.path = path
        self.found = found
        super().__init__(f"{path}: not an episode file (magic {found!r})")


class HeaderError(EpisodeFormatError):
    """The header length field or the header document is invalid."""

    def __init__(self, path, offset: int, reason: str):
        self.path = path
        self.offset = offset
        super().__init__(f"{path}: bad header at byte offset {offset}: {reason}")


class PayloadLengthError(EpisodeFormatError):
    """The array payload is shorter or longer than the header declares."""

    def __init__(self, path, expected: int, actual: int):
        self.path = path
        self.expected = expected
        self.actual = actual
        super().__init__(f"{path}: payload holds {actual} bytes, header declares {expected}")


class AugmentationError(BilatError):
    """An episode cannot be augmented with the requested settings."""
