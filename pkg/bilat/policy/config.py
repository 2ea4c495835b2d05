"""PolicyConfig and the per-channel normalization statistics of a dataset."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


MIN_STD = 1e-2


class NormalizationStats(BaseModel):
    """Per-channel mean and standard deviation of observations (follower) and actions (leader)."""

    model_config = ConfigDict(frozen=True)

    observation_mean: list[float]
    observation_std: list[float]
    action_mean: list[float]
    action_std: list[float]

    @model_validator(mode="after")
    def _check(self):
        if len(self.observation_mean) != len(self.observation_std):
            raise ValueError("observation mean and std lengths differ")
        if len(self.action_mean) != len(self.action_std):
            raise ValueError("action mean and std lengths differ")
        if min(self.observation_std + self.action_std) <= 0:
            raise ValueError("standard deviations must be positive")
        return self

    @classmethod
    def from_arrays(cls, observations: np.ndarray, actions: np.ndarray, min_std: float = MIN_STD) -> "NormalizationStats":
        """Statistics of [samples, channels] arrays; deviations are floored at `min_std`."""
        observations = np.asarray(observations, dtype=np.float64)
        actions = np.asarray(actions, dtype=np.float64)
        return cls(
            observation_mean=observations.mean(axis=0).tolist(),
            observation_std=np.maximum(observations.std(axis=0), min_std).tolist(),
            action_mean=actions.mean(axis=0).tolist(),
            action_std=np.maximum(actions.std(axis=0), min_std).tolist(),
        )

    def normalize_observation(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.observation_mean) / self.observation_std

    def normalize_action(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.action_mean) / self.action_std

    def denormalize_action(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=np.float64) * self.action_std + self.action_mean


class PolicyConfig(BaseModel):
    """Architecture and loss settings of the action-chunking CVAE.

    Observations and actions are flattened (angle, velocity, torque) triples of
    every joint of every arm on one side: 3 * joint_count * arms_per_side values.
    """

    model_config = ConfigDict(frozen=True)

    joint_count: int = Field(gt=0)
    arms_per_side: int = Field(default=1, gt=0)
    camera_count: int = Field(gt=0)
    image_height: int = 48
    image_width: int = 64
    language_dim: int = Field(gt=0)
    encoder_layers: int = Field(default=4, ge=1)
    decoder_layers: int = Field(default=7, ge=1)
    model_dim: int = Field(default=128, gt=0)
    head_count: int = Field(default=8, gt=0)
    feedforward_dim: int = Field(default=256, gt=0)
    chunk_size: int = Field(default=20, ge=1)
    latent_dim: int = Field(default=16, gt=0)
    kl_weight: float = Field(default=10.0, ge=0)
    backbone_channels: tuple[int, int, int, int] = (8, 16, 32, 32)
    use_language: bool = True
    dtype: Literal["float32", "float64"] = "float32"
    normalization: NormalizationStats | None = None

    @model_validator(mode="after")
    def _check(self):
        if self.model_dim % self.head_count:
            raise ValueError(f"model_dim {self.model_dim} is not divisible by head_count {self.head_count}")
        if self.image_height % 8 or self.image_width % 8 or min(self.image_height, self.image_width) < 24:
            raise ValueError(f"image size {self.image_width}x{self.image_height} must be multiples of 8, at least 24")
        if self.normalization is not None:
            for name in ("observation_mean", "action_mean"):
                if len(getattr(self.normalization, name)) != self.action_dim:
                    raise ValueError(f"normalization `{name}` has {len(getattr(self.normalization, name))} "
                                     f"channels, expected {self.action_dim}")
        return self

    @property
    def action_dim(self) -> int:
        return 3 * self.joint_count * self.arms_per_side

    @property
    def observation_dim(self) -> int:
        return self.action_dim

    @property
    def grid(self) -> tuple[int, int]:
        """(rows, columns) of visual tokens per camera."""
        return self.image_height // 8 - 2, self.image_width // 8 - 2

    @property
    def visual_token_count(self) -> int:
        rows, columns = self.grid
        return self.camera_count * rows * columns
