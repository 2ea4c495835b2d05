"""Instruction normalization and pluggable language encoders."""

from .embedding import LanguageEmbedding, cosine_similarity
from .encoders import (EncoderSelection, HashedEncoder, LanguageEncoder, PrecomputedEncoder,
                       PrecomputedTable, encode_hashed, get_encoder, load_precomputed)
from .errors import (DegenerateEmbeddingError, EmbeddingDimensionError, EmbeddingMissError,
                     EmptyInstructionError, LanguageError, PrecomputedFormatError)
from .prompt import PromptTemplate, normalize_instruction


def encode(text: str, encoder: LanguageEncoder, template: PromptTemplate = PromptTemplate()) -> LanguageEmbedding:
    """Normalize `text` with `template`, then embed it with `encoder`."""
    return encoder.embed(normalize_instruction(text, template))


__all__ = [
    "DegenerateEmbeddingError",
    "EmbeddingDimensionError",
    "EmbeddingMissError",
    "EmptyInstructionError",
    "EncoderSelection",
    "HashedEncoder",
    "LanguageEmbedding",
    "LanguageEncoder",
    "LanguageError",
    "PrecomputedEncoder",
    "PrecomputedFormatError",
    "PrecomputedTable",
    "PromptTemplate",
    "cosine_similarity",
    "encode",
    "encode_hashed",
    "get_encoder",
    "load_precomputed",
    "normalize_instruction",
]
