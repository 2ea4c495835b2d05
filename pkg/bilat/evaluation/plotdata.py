"""Per-tick series and histogram CSVs for external plotting."""

import csv
import logging
from pathlib import Path

import numpy as np

from ..datasets.episode import CHANNELS, Episode
from .histograms import Histogram


logger = logging.getLogger(__name__)


def series_columns(episode: Episode) -> list[str]:
    columns = ["time"]
    for stream in ("leader", "follower"):
        for arm in range(episode.arms_per_side):
            for joint in range(episode.joint_count):
                columns.extend(f"{stream}.arm{arm}.joint{joint}.{channel}" for channel in CHANNELS)
    return columns


def series_table(episode: Episode) -> np.ndarray:
    """[T, 1 + 2 * arms * joints * 3]: time, then leader and follower triples."""
    count = episode.sample_count
    return np.concatenate([
        episode.sample_times()[:, None],
        episode.leader.reshape(count, -1).astype(np.float64),
        episode.follower.reshape(count, -1).astype(np.float64),
    ], axis=1)


def write_series_csv(episode: Episode, path: str | Path) -> Path:
    """One row per control tick of the episode."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as file:
        writer = csv.writer(file)
        writer.writerow(series_columns(episode))
        for row in series_table(episode):
            writer.writerow([repr(float(value)) for value in row])
    logger.debug("series written", extra={"fields": {"path": str(path), "rows": episode.sample_count}})
    return path


def write_histogram_csv(histograms: dict[str, Histogram], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as file:
        writer = csv.writer(file)
        writer.writerow(["name", "channel", "bin_lo", "bin_hi", "count", "mass"])
        for name, histogram in histograms.items():
            for lo, hi, count, mass in zip(histogram.edges, histogram.edges[1:], histogram.counts, histogram.mass):
                writer.writerow([name, histogram.channel, repr(lo), repr(hi), count, repr(float(mass))])
    return path
