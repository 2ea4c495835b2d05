"""Language encoders: one class per encoder family, selected by `kind`."""

from typing import Annotated, Union

from pydantic import Field

from .base import LanguageEncoder
from .hashed import HashedEncoder, encode_hashed
from .precomputed import PrecomputedEncoder, PrecomputedTable, load_precomputed

EncoderSelection = Annotated[Union[HashedEncoder, PrecomputedEncoder], Field(discriminator="kind")]

_ENCODER_CLASSES: tuple[type[LanguageEncoder], ...] = (
    HashedEncoder,
    PrecomputedEncoder,
)


def get_encoder(kind: str, **options) -> LanguageEncoder:
    """Return an encoder instance for `kind` ('hashed' or 'precomputed')."""
    normalized = (kind or "").lower()
    for encoder_cls in _ENCODER_CLASSES:
        if normalized == encoder_cls.model_fields["kind"].default:
            return encoder_cls(**options)
    raise ValueError(f"Unsupported language encoder: {kind}")


__all__ = [
    "EncoderSelection",
    "HashedEncoder",
    "LanguageEncoder",
    "PrecomputedEncoder",
    "PrecomputedTable",
    "encode_hashed",
    "get_encoder",
    "load_precomputed",
]
