"""ActionChunk: K future leader (angle, velocity, torque) targets emitted by one policy query."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ActionChunk(BaseModel):
    """Leader targets in physical units, `values` shaped [K, arms * joints * 3]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    joint_count: int = Field(gt=0)
    arms: int = Field(default=1, gt=0)

    @field_validator("values")
    @classmethod
    def _finite(cls, value: np.ndarray):
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 2 or value.shape[0] == 0:
            raise ValueError(f"an action chunk is a non-empty [K, channels] array, got shape {value.shape}")
        if not np.all(np.isfinite(value)):
            raise ValueError("action chunk contains non-finite values")
        return value

    @model_validator(mode="after")
    def _width(self):
        if self.values.shape[1] != 3 * self.joint_count * self.arms:
            raise ValueError(f"{self.values.shape[1]} channels do not match {self.arms} arms "
                             f"of {self.joint_count} joints")
        return self

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def triples(self) -> np.ndarray:
        """The chunk as [K, arms, joints, 3]."""
        return self.values.reshape(self.size, self.arms, self.joint_count, 3)

    def row(self, step: int) -> np.ndarray:
        return self.values[step]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ActionChunk):
            return NotImplemented
        return (self.joint_count == other.joint_count and self.arms == other.arms
                and np.array_equal(self.values, other.values))
