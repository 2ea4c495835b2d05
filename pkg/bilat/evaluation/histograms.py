"""Probability-mass histograms of hold-window signals and their overlap."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..datasets.episode import CHANNELS, Episode
from .errors import EmptyWindowError, HistogramEdgeMismatchError
from .outcomes import window_mask


DEFAULT_RANGES = {"angle": None, "velocity": None, "torque": (-0.05, 0.35)}


class Histogram(BaseModel):
    """Uniform bins; values beyond the outer edges are counted in the outer bins."""

    model_config = ConfigDict(frozen=True)

    edges: list[float]
    counts: list[int]
    channel: str

    @model_validator(mode="after")
    def _check(self):
        if len(self.edges) < 3:
            raise ValueError("a histogram needs at least two bins")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("histogram edges must be strictly increasing")
        if len(self.counts) != len(self.edges) - 1:
            raise ValueError(f"{len(self.counts)} counts for {len(self.edges) - 1} bins")
        return self

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def mass(self) -> np.ndarray:
        counts = np.asarray(self.counts, dtype=np.float64)
        total = counts.sum()
        return counts / total if total else counts

    def mass_between(self, lo: float, hi: float) -> float:
        """Mass inside [lo, hi], counting a partly covered bin in proportion to its overlap."""
        edges = np.asarray(self.edges)
        covered = np.clip(np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo), 0.0, None)
        return float((self.mass * covered / np.diff(edges)).sum())


def histogram_of(values: np.ndarray, channel: str, bins: int = 20,
                 value_range: tuple[float, float] | None = None) -> Histogram:
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if bins < 2:
        raise ValueError(f"bins must be at least 2, got {bins}")
    if value_range is None:
        if values.size == 0:
            raise ValueError("cannot infer a histogram range from no values")
        lo, hi = float(values.min()), float(values.max())
        if hi - lo < 1e-12:
            lo, hi = lo - 0.5, hi + 0.5
        value_range = (lo, hi)
    edges = np.linspace(value_range[0], value_range[1], bins + 1)
    clipped = np.clip(values, edges[0], edges[-1])
    counts, _ = np.histogram(clipped, bins=edges)
    return Histogram(edges=edges.tolist(), counts=counts.tolist(), channel=channel)


def grip_histogram(episode: Episode, channel: Literal["angle", "velocity", "torque"] = "torque",
                   window: tuple[float, float | None] = (0.0, None), bins: int = 20,
                   value_range: tuple[float, float] | None = None, joint: int | None = None,
                   stream: Literal["follower", "leader"] = "follower") -> Histogram:
    """Histogram of one channel of the gripper (or `joint`) over `window`, every arm pooled.

    Raises:
        EmptyWindowError: no sample falls inside the window.
    """
    if bins < 2:
        raise ValueError(f"bins must be at least 2, got {bins}")
    mask = window_mask(episode, window)
    if not mask.any():
        raise EmptyWindowError(window, f"episode spans {episode.start_time:g}-"
                                       f"{episode.start_time + episode.duration:g} s")
    joint = episode.joint_count - 1 if joint is None else joint
    data = getattr(episode, stream)[mask][:, :, joint, CHANNELS.index(channel)]
    if value_range is None:
        value_range = DEFAULT_RANGES[channel]
    return histogram_of(data, f"{stream}.joint{joint}.{channel}", bins, value_range)


def pooled_histogram(histograms: list[Histogram]) -> Histogram:
    """Sum of the counts of histograms sharing their edges."""
    first = histograms[0]
    for other in histograms[1:]:
        if other.edges != first.edges:
            raise HistogramEdgeMismatchError(first.edges, other.edges)
    counts = np.sum([h.counts for h in histograms], axis=0)
    return Histogram(edges=first.edges, counts=counts.tolist(), channel=first.channel)


def overlap_coefficient(first: Histogram, second: Histogram) -> float:
    """Sum over bins of the smaller probability mass; symmetric, within [0, 1]."""
    if first.edges != second.edges:
        raise HistogramEdgeMismatchError(first.edges, second.edges)
    return float(np.minimum(first.mass, second.mass).sum())
