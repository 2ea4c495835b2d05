"""Downsampling augmentation: one high-rate episode becomes `factor` phase-offset low-rate episodes."""

import logging

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .episode import Episode
from .errors import AugmentationError


logger = logging.getLogger(__name__)


class DabiConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    source_rate: int = Field(default=1000, gt=0)
    target_rate: int = Field(default=100, gt=0)

    @model_validator(mode="after")
    def _divisible(self):
        if self.source_rate % self.target_rate:
            raise ValueError(f"source rate {self.source_rate} Hz is not divisible by "
                             f"target rate {self.target_rate} Hz")
        return self

    @property
    def factor(self) -> int:
        return self.source_rate // self.target_rate


def dabi_augment(episode: Episode, cfg: DabiConfig) -> list[Episode]:
    """Split `episode` into `cfg.factor` decimated copies, one per phase offset.

    Offset `o` keeps samples o, o + factor, o + 2 * factor, ... unchanged. Frame
    streams are shared, and each kept sample pairs with the latest frame taken at
    or before it.
    """
    if episode.control_rate != cfg.source_rate:
        raise AugmentationError(f"episode runs at {episode.control_rate} Hz, augmentation expects "
                                f"{cfg.source_rate} Hz")
    factor = cfg.factor
    if episode.sample_count % factor:
        raise AugmentationError(f"{episode.sample_count} samples are not divisible by factor {factor}")
    if factor == 1:
        return [episode.model_copy()]
    if (episode.sample_count // factor) * episode.image_rate != episode.frame_count * cfg.target_rate:
        raise AugmentationError(f"target rate {cfg.target_rate} Hz does not align with "
                                f"{episode.frame_count} frames at {episode.image_rate} Hz")
    augmented = []
    for offset in range(factor):
        augmented.append(Episode(
            task=episode.task,
            instruction=episode.instruction,
            normalized_instruction=episode.normalized_instruction,
            control_rate=cfg.target_rate,
            image_rate=episode.image_rate,
            joint_count=episode.joint_count,
            arm_count=episode.arm_count,
            leader=episode.leader[offset::factor].copy(),
            follower=episode.follower[offset::factor].copy(),
            frames=episode.frames,
            seed=episode.seed,
            start_time=episode.start_time + offset / cfg.source_rate,
            annotations={**episode.annotations,
                         "dabi": {"offset": offset, "factor": factor, "source_rate": cfg.source_rate}},
        ))
    logger.debug("episode augmented", extra={"fields": {"factor": factor, "samples": augmented[0].sample_count}})
    return augmented
