"""Base LanguageEncoder type: subclasses embed an already-normalized instruction."""

from abc import ABC, abstractmethod

from pydantic import BaseModel, ConfigDict

from ..embedding import LanguageEmbedding


class LanguageEncoder(BaseModel, ABC):
    """Base for language encoders; the `kind` field selects the subclass in configs."""

    model_config = ConfigDict(frozen=True)

    kind: str

    @property
    @abstractmethod
    def encoder_id(self) -> str:
        """Provenance tag carried by every embedding this encoder produces."""

    @property
    @abstractmethod
    def dim(self) -> int:
        ...  # pylint: disable=unnecessary-ellipsis

    @abstractmethod
    def embed(self, normalized_text: str) -> LanguageEmbedding:
        """Embedding of a normalized instruction."""
