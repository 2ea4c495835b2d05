"""Temporal ensembling of overlapping action chunks.

Ticks here are policy steps. A chunk issued at step s predicts steps s .. s+K-1;
its prediction for step t is weighted by exp(-decay * (t - s)).
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr


logger = logging.getLogger(__name__)


class PendingChunk(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    issue_tick: int
    values: np.ndarray

    def covers(self, tick: int) -> bool:
        return self.issue_tick <= tick < self.issue_tick + self.values.shape[0]


class EnsembleState(BaseModel):
    """Pending chunks sorted by issue tick.

    With `enabled` false the newest covering chunk is used verbatim.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    decay: float = Field(default=0.01, ge=0)
    enabled: bool = True
    chunks: list[PendingChunk] = Field(default_factory=list)
    last_target: np.ndarray | None = None
    gaps: int = 0
    _gap_open: bool = PrivateAttr(default=False)

    def add(self, issue_tick: int, values: np.ndarray) -> None:
        chunk = PendingChunk(issue_tick=issue_tick, values=np.asarray(values, dtype=np.float64))
        self.chunks = sorted([*self.chunks, chunk], key=lambda item: item.issue_tick)

    def prune(self, tick: int) -> None:
        """Forget chunks that end before `tick`."""
        self.chunks = [chunk for chunk in self.chunks if chunk.issue_tick + chunk.values.shape[0] > tick]

    def covering(self, tick: int) -> list[PendingChunk]:
        return [chunk for chunk in self.chunks if chunk.covers(tick)]

    def blend(self, tick: int) -> np.ndarray | None:
        """Weighted prediction for `tick`, or None when no chunk covers it."""
        chunks = self.covering(tick)
        if not chunks:
            return None
        if not self.enabled:
            newest = chunks[-1]
            return newest.values[tick - newest.issue_tick].copy()
        weights = np.array([np.exp(-self.decay * (tick - chunk.issue_tick)) for chunk in chunks])
        weights /= weights.sum()
        rows = np.stack([chunk.values[tick - chunk.issue_tick] for chunk in chunks])
        return weights @ rows


def temporal_ensemble(state: EnsembleState, tick: int) -> tuple[np.ndarray, bool]:
    """Leader target for policy step `tick` and whether it had to hold the previous target.

    Raises:
        ValueError: no chunk covers the tick and there is no previous target to hold.
    """
    target = state.blend(tick)
    if target is None:
        if state.last_target is None:
            raise ValueError(f"no chunk covers step {tick} and there is no target to hold")
        if not state._gap_open:
            state.gaps += 1
            logger.warning("no chunk covers the current step, holding the last target",
                           extra={"fields": {"step": tick}})
        state._gap_open = True
        return state.last_target.copy(), True
    state._gap_open = False
    state.last_target = target
    return target, False
