"""Deterministic bag-of-tokens encoder based on a keyed 64-bit hash."""

import hashlib
from typing import Literal

import numpy as np
from pydantic import Field

from ..embedding import LanguageEmbedding
from ..errors import DegenerateEmbeddingError
from .base import LanguageEncoder


def _token_hash(token: str, seed: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=str(seed).encode("ascii")).digest()
    return int.from_bytes(digest, "little")


def encode_hashed(text: str, dim: int, seed: int) -> LanguageEmbedding:
    """Hash every whitespace-separated token to a signed slot, accumulate, L2-normalize."""
    if dim < 8:
        raise ValueError(f"hashed embeddings need at least 8 dimensions, got {dim}")
    values = np.zeros(dim)
    for token in text.split():
        code = _token_hash(token, seed)
        values[code % dim] += -1.0 if code >> 63 else 1.0
    norm = np.linalg.norm(values)
    if norm == 0:
        raise DegenerateEmbeddingError(text)
    return LanguageEmbedding(encoder_id=f"hashed-{dim}-{seed}", values=values / norm)


class HashedEncoder(LanguageEncoder):
    kind: Literal["hashed"] = "hashed"
    dimension: int = Field(default=64, ge=8)
    seed: int = 0

    @property
    def encoder_id(self) -> str:
        return f"hashed-{self.dimension}-{self.seed}"

    @property
    def dim(self) -> int:
        return self.dimension

    def embed(self, normalized_text: str) -> LanguageEmbedding:
        return encode_hashed(normalized_text, self.dimension, self.seed)
