"""Instruction-conditioned reference bands and the analysis window they apply to."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..datasets.episode import Episode


def _same_instruction(a: str, b: str) -> bool:
    return " ".join(a.lower().split()) == " ".join(b.lower().split())


class InstructionBand(BaseModel):
    """Angle and torque ranges expected for one instruction, as half-open [lo, hi) intervals.

    `window_start` is None when the window opens at the task's grasp event;
    `window_end` is None when it runs to the release event, or to the end of
    the episode for fixed-start windows.
    """

    model_config = ConfigDict(frozen=True)

    instruction: str
    angle: tuple[float, float]
    torque: tuple[float, float]
    window_start: float | None = None
    window_end: float | None = None

    @model_validator(mode="after")
    def _ordered(self):
        for name in ("angle", "torque"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} band of {self.instruction!r} needs lo < hi, got ({lo}, {hi})")
        if self.window_start is not None and self.window_end is not None and self.window_end <= self.window_start:
            raise ValueError(f"window of {self.instruction!r} ends before it starts")
        return self

    @property
    def centre(self) -> float:
        return 0.5 * (self.torque[0] + self.torque[1])

    def contains_torque(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values)
        return (values >= self.torque[0]) & (values < self.torque[1])


class ForceBands(BaseModel):
    model_config = ConfigDict(frozen=True)

    bands: list[InstructionBand] = Field(min_length=1)

    @model_validator(mode="after")
    def _disjoint(self):
        ordered = self.ordered()
        for lower, upper in zip(ordered, ordered[1:]):
            if lower.torque[1] > upper.torque[0]:
                raise ValueError(f"torque bands of {lower.instruction!r} and {upper.instruction!r} overlap")
        return self

    def ordered(self) -> list[InstructionBand]:
        """Bands sorted by torque-band centre."""
        return sorted(self.bands, key=lambda band: band.centre)

    def for_instruction(self, instruction: str) -> InstructionBand:
        for band in self.bands:
            if _same_instruction(band.instruction, instruction):
                return band
        known = ", ".join(repr(band.instruction) for band in self.bands)
        raise KeyError(f"no force band for instruction {instruction!r} (known: {known})")

    def find(self, episode: Episode) -> InstructionBand | None:
        for band in self.bands:
            if _same_instruction(band.instruction, episode.instruction):
                return band
        return None


def cup_force_bands() -> ForceBands:
    """Cup stacking: torque bands envelope the soft and strong expert grips; windows follow the grasp."""
    return ForceBands(bands=[
        InstructionBand(instruction="softly grasp the cup", angle=(2.45, 2.60), torque=(0.0, 0.08)),
        InstructionBand(instruction="strongly grasp the cup", angle=(2.65, 2.75), torque=(0.12, 0.25)),
    ])


def sponge_force_bands() -> ForceBands:
    """Sponge twisting: bands over the data after six seconds."""
    return ForceBands(bands=[
        InstructionBand(instruction="softly twist the sponge", angle=(3.0, 3.25), torque=(0.0, 0.10),
                        window_start=6.0),
        InstructionBand(instruction="strongly twist the sponge", angle=(3.25, 3.5), torque=(0.10, 0.30),
                        window_start=6.0),
    ])


def default_force_bands(task: str) -> ForceBands:
    if task == "cup":
        return cup_force_bands()
    if task == "sponge":
        return sponge_force_bands()
    raise ValueError(f"Unsupported task: {task}")
