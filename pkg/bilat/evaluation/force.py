"""Force-accuracy scoring and the three-level rating.

Rating rule:
  "○" every instruction scores at least 0.9 and the adjacent-instruction
      hold-window torque histograms overlap by less than 0.2;
  "△" instructions are separated in extrema: every rollout of the lower
      instruction peaks below the threshold between the two bands and every
      rollout of the upper one peaks above it;
  "×" otherwise.
"""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..datasets.episode import Episode
from .bands import ForceBands
from .errors import EmptyWindowError
from .histograms import Histogram, histogram_of, overlap_coefficient
from .outcomes import band_coverage, gripper_torques, hold_window


logger = logging.getLogger(__name__)

SCORE_THRESHOLD = 0.9
OVERLAP_THRESHOLD = 0.2
RATING_RULE = ("score = mean fraction of hold-window gripper torques inside the instruction's band "
               "(crushed rollouts score 0); ○ if every score >= 0.9 and adjacent overlap < 0.2; "
               "△ if hold-window peaks fall on the correct side of the midpoint between adjacent bands; "
               "× otherwise")


class InstructionScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    instruction: str
    score: float
    rollouts: int
    scored: int
    peaks: list[float | None]
    histogram: Histogram | None = None


class ForceAccuracy(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str = ""
    instructions: list[InstructionScore]
    score: float
    overlap: float | None
    separated: bool
    rating: str


def rate(scores: list[float], overlap: float | None, separated: bool) -> str:
    """Map scores, overlap and extrema separation to ○, △ or ×."""
    if scores and min(scores) >= SCORE_THRESHOLD and (overlap is None or overlap < OVERLAP_THRESHOLD):
        return "○"
    if separated:
        return "△"
    return "×"


def force_accuracy(rollouts: dict[str, list[Episode]], bands: ForceBands, bins: int = 40,
                   label: str = "") -> ForceAccuracy:
    """Score rollouts grouped by instruction against the bands.

    A rollout without a hold window scores 0 and has no peak.

    Raises:
        EmptyWindowError: no rollout of some instruction has a hold window.
    """
    if not rollouts or any(not episodes for episodes in rollouts.values()):
        raise ValueError("force accuracy needs at least one rollout per instruction")
    edges_range = (min(0.0, bands.ordered()[0].torque[0]) - 0.05, bands.ordered()[-1].torque[1] + 0.1)

    scored: dict[str, InstructionScore] = {}
    for instruction, episodes in rollouts.items():
        band = bands.for_instruction(instruction)
        coverages, peaks, pooled = [], [], []
        for episode in episodes:
            window = hold_window(episode, band)
            crushed = bool(episode.annotations.get("crushed", False))
            coverage = band_coverage(episode, band, window, crushed)
            if coverage is None:
                coverages.append(0.0)
                peaks.append(None)
                continue
            values = gripper_torques(episode, window)
            coverages.append(coverage)
            peaks.append(float(values.max()))
            pooled.append(values)
        if not pooled:
            raise EmptyWindowError((band.window_start or 0.0, band.window_end),
                                   f"no {instruction!r} rollout held a grasp")
        scored[instruction] = InstructionScore(
            instruction=instruction,
            score=float(np.mean(coverages)),
            rollouts=len(episodes),
            scored=len(pooled),
            peaks=peaks,
            histogram=histogram_of(np.concatenate(pooled), "follower.gripper.torque", bins, edges_range),
        )

    order = sorted(scored.values(), key=lambda item: bands.for_instruction(item.instruction).centre)
    overlap = None
    separated = len(order) > 1
    for lower, upper in zip(order, order[1:]):
        low_band = bands.for_instruction(lower.instruction)
        high_band = bands.for_instruction(upper.instruction)
        threshold = 0.5 * (low_band.torque[1] + high_band.torque[0])
        pair_overlap = overlap_coefficient(lower.histogram, upper.histogram)
        overlap = pair_overlap if overlap is None else max(overlap, pair_overlap)
        separated &= (all(p is not None and p < threshold for p in lower.peaks)
                      and all(p is not None and p > threshold for p in upper.peaks))

    scores = [item.score for item in order]
    result = ForceAccuracy(
        label=label,
        instructions=order,
        score=float(np.mean(scores)),
        overlap=overlap,
        separated=separated,
        rating=rate(scores, overlap, separated),
    )
    logger.info("force accuracy rated", extra={"fields": {
        "label": label, "score": round(result.score, 4), "overlap": overlap, "rating": result.rating,
    }})
    return result
