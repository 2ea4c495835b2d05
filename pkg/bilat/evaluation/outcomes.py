"""Stage detection, hold windows and per-joint statistics of one episode.

Detectors are pure functions of the episode and its scene log.
"""

import logging
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..datasets.episode import Episode
from .bands import ForceBands, InstructionBand
from .errors import MissingSceneLogError


logger = logging.getLogger(__name__)

CUP_STAGES = ("pick", "move", "place")
SPONGE_STAGES = ("grab", "lift", "twist")
SPONGE_WINDOW_START = 6.0


class JointStats(BaseModel):
    """Follower angle and reaction torque of one joint over the hold window."""

    model_config = ConfigDict(frozen=True)

    arm: int
    joint: int
    angle_mean: float
    angle_std: float
    angle_min: float
    angle_max: float
    torque_mean: float
    torque_std: float
    torque_min: float
    torque_max: float


class TaskOutcome(BaseModel):
    task: str
    instruction: str
    stages: dict[str, bool]
    success: bool
    crushed: bool = False
    slipped: bool = False
    force_accuracy: float | None = None
    """Fraction of hold-window gripper torques inside the instruction's band; None without a window."""
    hold_window: tuple[float, float] | None = None
    joint_stats: list[JointStats] = Field(default_factory=list)
    label: str = ""

    def stage(self, name: str) -> bool:
        return self.stages[name]


def _events(episode: Episode, scene_log: list[dict[str, Any]] | None) -> list[dict[str, Any]]:
    if scene_log is not None:
        return scene_log
    if "scene_log" not in episode.annotations:
        raise MissingSceneLogError(str(episode.annotations.get("path", "")))
    return episode.scene_log


def _first(events: list[dict[str, Any]], *kinds: str, after: float = -np.inf) -> dict[str, Any] | None:
    for event in events:
        if event["kind"] in kinds and event["time"] >= after:
            return event
    return None


def _has(events: list[dict[str, Any]], kind: str) -> bool:
    return _first(events, kind) is not None


def episode_end(episode: Episode) -> float:
    return episode.start_time + episode.duration


def hold_window(episode: Episode, band: InstructionBand | None = None,
                scene_log: list[dict[str, Any]] | None = None) -> tuple[float, float] | None:
    """Interval over which the grasp is held.

    Cup: from the grasp event to the following stack or drop (or the end of the
    episode). Sponge: from six seconds on. A band with a fixed `window_start`
    overrides either rule; None means the grasp never happened.
    """
    end = episode_end(episode)
    start = band.window_start if band is not None else None
    if start is None and episode.task == "sponge":
        start = SPONGE_WINDOW_START
    if start is not None:
        stop = band.window_end if band is not None and band.window_end is not None else end
        return (start, stop) if stop > start else None
    events = _events(episode, scene_log)
    grasp = _first(events, "grasp", "grab")
    if grasp is None:
        return None
    release = _first(events, "stack", "drop", "release", after=grasp["time"])
    stop = release["time"] if release is not None else end
    if band is not None and band.window_end is not None:
        stop = min(stop, band.window_end)
    return (grasp["time"], stop) if stop > grasp["time"] else None


def window_mask(episode: Episode, window: tuple[float, float | None]) -> np.ndarray:
    times = episode.sample_times()
    start, end = window
    mask = times >= start - 1e-9
    if end is not None:
        mask &= times < end - 1e-9
    return mask


def gripper_torques(episode: Episode, window: tuple[float, float | None]) -> np.ndarray:
    """Follower gripper reaction torques of every arm inside `window`, arms concatenated."""
    mask = window_mask(episode, window)
    gripper = episode.joint_count - 1
    return np.concatenate([episode.follower[mask, arm, gripper, 2].astype(np.float64)
                           for arm in range(episode.arms_per_side)])


def joint_statistics(episode: Episode, window: tuple[float, float]) -> list[JointStats]:
    mask = window_mask(episode, window)
    if not mask.any():
        return []
    stats = []
    for arm in range(episode.arms_per_side):
        for joint in range(episode.joint_count):
            angle = episode.follower[mask, arm, joint, 0].astype(np.float64)
            torque = episode.follower[mask, arm, joint, 2].astype(np.float64)
            stats.append(JointStats(
                arm=arm, joint=joint,
                angle_mean=float(angle.mean()), angle_std=float(angle.std()),
                angle_min=float(angle.min()), angle_max=float(angle.max()),
                torque_mean=float(torque.mean()), torque_std=float(torque.std()),
                torque_min=float(torque.min()), torque_max=float(torque.max()),
            ))
    return stats


def band_coverage(episode: Episode, band: InstructionBand, window: tuple[float, float] | None,
                  crushed: bool = False) -> float | None:
    """Fraction of hold-window gripper torques inside the band; a crushed grasp scores 0."""
    if window is None:
        return None
    values = gripper_torques(episode, window)
    if values.size == 0:
        return None
    if crushed:
        return 0.0
    return float(band.contains_torque(values).mean())


def _outcome(episode: Episode, stages: dict[str, bool], crushed: bool, slipped: bool,
             bands: ForceBands | None, scene_log) -> TaskOutcome:
    band = bands.find(episode) if bands is not None else None
    window = hold_window(episode, band, scene_log)
    outcome = TaskOutcome(
        task=episode.task,
        instruction=episode.instruction,
        stages=stages,
        success=all(stages.values()),
        crushed=crushed,
        slipped=slipped,
        force_accuracy=band_coverage(episode, band, window, crushed) if band is not None else None,
        hold_window=window,
        joint_stats=joint_statistics(episode, window) if window is not None else [],
        label=str(episode.annotations.get("path", "")),
    )
    logger.info("episode scored", extra={"fields": {
        "task": episode.task, "instruction": episode.instruction, "success": outcome.success,
        **{stage: value for stage, value in stages.items()},
    }})
    return outcome


def detect_cup_outcome(episode: Episode, scene_log: list[dict[str, Any]] | None = None,
                       bands: ForceBands | None = None) -> TaskOutcome:
    """Pick: the cup entered the gripper. Move: carried over the apex. Place: stacked, then reopened."""
    events = _events(episode, scene_log)
    stages = {
        "pick": _has(events, "grasp"),
        "move": _has(events, "apex"),
        "place": _has(events, "stack") and _has(events, "reopen"),
    }
    crushed = _has(events, "crush") or bool(episode.annotations.get("crushed", False))
    return _outcome(episode, stages, crushed, False, bands, events)


def detect_sponge_outcome(episode: Episode, scene_log: list[dict[str, Any]] | None = None,
                          bands: ForceBands | None = None) -> TaskOutcome:
    """Grab: both grippers engaged. Lift: lift pose reached while held. Twist: goal twist without slip."""
    if episode.arms_per_side != 2:
        raise ValueError(f"sponge scoring needs a bimanual episode, got {episode.arms_per_side} arm(s) per side")
    events = _events(episode, scene_log)
    slipped = _has(events, "slip") or bool(episode.annotations.get("slipped", False))
    stages = {
        "grab": _has(events, "grab"),
        "lift": _has(events, "lift"),
        "twist": _has(events, "twist") and not slipped,
    }
    crushed = _has(events, "crush") or bool(episode.annotations.get("crushed", False))
    return _outcome(episode, stages, crushed, slipped, bands, events)


def detect_outcome(episode: Episode, scene_log: list[dict[str, Any]] | None = None,
                   bands: ForceBands | None = None) -> TaskOutcome:
    if episode.task == "cup":
        return detect_cup_outcome(episode, scene_log, bands)
    if episode.task == "sponge":
        return detect_sponge_outcome(episode, scene_log, bands)
    raise ValueError(f"Unsupported task: {episode.task}")
