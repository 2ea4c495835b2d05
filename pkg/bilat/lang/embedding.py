"""LanguageEmbedding: a unit vector tagged with the encoder that produced it."""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class LanguageEmbedding(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    encoder_id: str
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _vector(cls, value):
        return np.array(value, dtype=np.float64).reshape(-1)

    @model_validator(mode="after")
    def _finite(self):
        if self.values.shape[0] == 0:
            raise ValueError("embedding is empty")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"embedding from {self.encoder_id!r} contains non-finite values")
        return self

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def normalized(self) -> "LanguageEmbedding":
        norm = np.linalg.norm(self.values)
        if norm == 0:
            raise ValueError(f"cannot normalize a zero embedding from {self.encoder_id!r}")
        return LanguageEmbedding(encoder_id=self.encoder_id, values=self.values / norm)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LanguageEmbedding):
            return NotImplemented
        return self.encoder_id == other.encoder_id and np.array_equal(self.values, other.values)


def cosine_similarity(a: LanguageEmbedding, b: LanguageEmbedding) -> float:
    return float(np.dot(a.values, b.values) / (np.linalg.norm(a.values) * np.linalg.norm(b.values)))
