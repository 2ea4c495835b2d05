"""Embeddings computed offline by large text encoders, loaded from a tab-separated file.

Each line reads `encoder_id<TAB>dim<TAB>normalized text<TAB>comma-separated floats`;
blank lines and lines starting with `#` are skipped.
"""

import logging
import math
from pathlib import Path
from typing import Literal

from pydantic import PrivateAttr

from ..embedding import LanguageEmbedding
from ..errors import EmbeddingDimensionError, EmbeddingMissError, PrecomputedFormatError
from .base import LanguageEncoder


logger = logging.getLogger(__name__)


class PrecomputedTable:
    """Exact-match lookup from (encoder_id, normalized text) to a stored embedding."""

    def __init__(self):
        self._entries: dict[tuple[str, str], LanguageEmbedding] = {}
        self.dims: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def encoder_ids(self) -> list[str]:
        return sorted(self.dims)

    def add(self, embedding: LanguageEmbedding, text: str) -> None:
        known = self.dims.setdefault(embedding.encoder_id, embedding.dim)
        if known != embedding.dim:
            raise EmbeddingDimensionError(
                f"encoder {embedding.encoder_id!r} has {known}-dimensional embeddings, "
                f"got one of dimension {embedding.dim} for {text!r}")
        self._entries[(embedding.encoder_id, text)] = embedding

    def lookup(self, text: str, encoder_id: str | None = None) -> LanguageEmbedding:
        if encoder_id is None:
            if len(self.dims) != 1:
                raise EmbeddingMissError(text)
            encoder_id = next(iter(self.dims))
        try:
            return self._entries[(encoder_id, text)]
        except KeyError:
            raise EmbeddingMissError(text, encoder_id) from None


def load_precomputed(path: str | Path) -> PrecomputedTable:
    """Parse a precomputed-embedding file into a lookup table."""
    path = Path(path)
    table = PrecomputedTable()
    with path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise PrecomputedFormatError(path, line_number, f"expected 4 tab-separated fields, got {len(fields)}")
            encoder_id, dim, text, values = fields
            try:
                dim = int(dim)
                vector = [float(value) for value in values.split(",")]
            except ValueError as error:
                raise PrecomputedFormatError(path, line_number, str(error)) from error
            if len(vector) != dim:
                raise PrecomputedFormatError(path, line_number, f"declares dim {dim} but lists {len(vector)} values")
            if not all(math.isfinite(value) for value in vector):
                raise PrecomputedFormatError(path, line_number, "values must be finite")
            if not encoder_id or not text:
                raise PrecomputedFormatError(path, line_number, "encoder id and text must not be empty")
            try:
                table.add(LanguageEmbedding(encoder_id=encoder_id, values=vector), text)
            except EmbeddingDimensionError as error:
                raise EmbeddingDimensionError(f"{path}:{line_number}: {error}") from error
    logger.info("precomputed embeddings loaded", extra={"fields": {
        "path": str(path), "entries": len(table), "encoders": ",".join(table.encoder_ids)}})
    return table


class PrecomputedEncoder(LanguageEncoder):
    """Looks instructions up in a precomputed file; a miss is an error, never a fallback."""

    kind: Literal["precomputed"] = "precomputed"
    path: Path
    encoder: str | None = None
    """Which encoder_id of the file to use; optional when the file holds only one."""

    _table: PrecomputedTable | None = PrivateAttr(default=None)

    @property
    def table(self) -> PrecomputedTable:
        if self._table is None:
            self._table = load_precomputed(self.path)
        return self._table

    @property
    def encoder_id(self) -> str:
        if self.encoder is not None:
            return self.encoder
        ids = self.table.encoder_ids
        if len(ids) != 1:
            raise EmbeddingDimensionError(f"{self.path} holds encoders {ids}; choose one with `encoder`")
        return ids[0]

    @property
    def dim(self) -> int:
        return self.table.dims[self.encoder_id]

    def embed(self, normalized_text: str) -> LanguageEmbedding:
        return self.table.lookup(normalized_text, self.encoder_id)
