"""Errors raised while normalizing instructions or producing embeddings."""

from ..errors import BilatError


class LanguageError(BilatError):
    """Base class for language-channel failures."""


class EmptyInstructionError(LanguageError):
    def __init__(self):
        super().__init__("instruction is empty after trimming whitespace")


class DegenerateEmbeddingError(LanguageError):
    """Hashing cancelled out every token and left a zero vector."""

    def __init__(self, text: str):
        self.text = text
        super().__init__(f"embedding of {text!r} is all zeros")


class PrecomputedFormatError(LanguageError):
    def __init__(self, path, line_number: int, reason: str):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {reason}")


class EmbeddingDimensionError(LanguageError):
    """Embeddings of one encoder disagree on their dimension."""


class EmbeddingMissError(LanguageError):
    """The precomputed table has no entry for the requested text."""

    def __init__(self, text: str, encoder_id: str | None = None):
        self.text = text
        self.encoder_id = encoder_id
        where = f" for encoder {encoder_id!r}" if encoder_id else ""
        super().__init__(f"no precomputed embedding{where} for {text!r}")
