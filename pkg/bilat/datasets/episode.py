"""The Episode type: time-aligned leader/follower joint streams, camera frames and one instruction."""

import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


CHANNELS = ("angle", "velocity", "torque")


class Episode(BaseModel):
    """One demonstration or rollout.

    `leader` and `follower` are float32 arrays shaped [T, arms, joints, 3] holding
    (angle, velocity, reaction torque) per joint; `frames` holds one uint8 array
    [M, height, width, 3] per camera. Samples start at `start_time` and are spaced
    by 1 / control_rate; frames start at 0 and are spaced by 1 / image_rate.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    task: str
    instruction: str
    normalized_instruction: str
    control_rate: int = Field(gt=0)
    image_rate: int = Field(gt=0)
    joint_count: int = Field(gt=0)
    arm_count: int = Field(gt=0)
    """Total number of arms, leaders and followers together."""
    leader: np.ndarray
    follower: np.ndarray
    frames: list[np.ndarray]
    seed: int
    start_time: float = 0.0
    annotations: dict[str, Any] = Field(default_factory=dict)

    @field_validator("leader", "follower")
    @classmethod
    def _stream(cls, value: np.ndarray):
        if value.dtype != np.float32 or value.ndim != 4 or value.shape[-1] != 3:
            raise ValueError(f"joint streams are float32 [T, arms, joints, 3], got {value.dtype} {value.shape}")
        if not np.all(np.isfinite(value)):
            raise ValueError("joint stream contains non-finite values")
        return value

    @field_validator("frames")
    @classmethod
    def _frames(cls, value: list[np.ndarray]):
        for frames in value:
            if frames.dtype != np.uint8 or frames.ndim != 4 or frames.shape[-1] != 3:
                raise ValueError(f"camera frames are uint8 [M, H, W, 3], got {frames.dtype} {frames.shape}")
        return value

    @model_validator(mode="after")
    def _aligned(self):
        if self.leader.shape != self.follower.shape:
            raise ValueError(f"leader {self.leader.shape} and follower {self.follower.shape} differ")
        _, arms, joints, _ = self.leader.shape
        if joints != self.joint_count or 2 * arms != self.arm_count:
            raise ValueError(f"streams cover {arms} arm pairs of {joints} joints, header says "
                             f"{self.arm_count} arms of {self.joint_count} joints")
        if not self.frames:
            raise ValueError("an episode needs at least one camera")
        counts = {frames.shape[0] for frames in self.frames}
        if len(counts) != 1:
            raise ValueError(f"cameras disagree on the frame count: {sorted(counts)}")
        if self.sample_count * self.image_rate != self.frame_count * self.control_rate:
            raise ValueError(f"{self.sample_count} samples at {self.control_rate} Hz do not span "
                             f"{self.frame_count} frames at {self.image_rate} Hz")
        return self

    @property
    def sample_count(self) -> int:
        return self.leader.shape[0]

    @property
    def frame_count(self) -> int:
        return self.frames[0].shape[0]

    @property
    def arms_per_side(self) -> int:
        return self.leader.shape[1]

    @property
    def camera_count(self) -> int:
        return len(self.frames)

    @property
    def image_size(self) -> tuple[int, int]:
        """(height, width) of every camera frame."""
        return self.frames[0].shape[1], self.frames[0].shape[2]

    @property
    def duration(self) -> float:
        return self.sample_count / self.control_rate

    def sample_time(self, index: int) -> float:
        return self.start_time + index / self.control_rate

    def sample_times(self) -> np.ndarray:
        return self.start_time + np.arange(self.sample_count) / self.control_rate

    def frame_index(self, sample_index: int) -> int:
        """Index of the latest frame captured at or before sample `sample_index`."""
        frame = math.floor(self.sample_time(sample_index) * self.image_rate + 1e-9)
        return min(frame, self.frame_count - 1)

    def frames_at(self, sample_index: int) -> list[np.ndarray]:
        frame = self.frame_index(sample_index)
        return [frames[frame] for frames in self.frames]

    @property
    def scene_log(self) -> list[dict[str, Any]]:
        return self.annotations.get("scene_log", [])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Episode):
            return NotImplemented
        scalar_fields = ("task", "instruction", "normalized_instruction", "control_rate", "image_rate",
                         "joint_count", "arm_count", "seed", "annotations")
        return (all(getattr(self, name) == getattr(other, name) for name in scalar_fields)
                and self.start_time == other.start_time
                and np.array_equal(self.leader, other.leader)
                and np.array_equal(self.follower, other.follower)
                and len(self.frames) == len(other.frames)
                and all(np.array_equal(a, b) for a, b in zip(self.frames, other.frames)))
