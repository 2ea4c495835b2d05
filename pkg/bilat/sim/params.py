"""Plant parameters and the joint-space state of one simulated arm."""

from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class JointParams(BaseModel):
    """Rigid-body parameters of a single revolute joint."""

    model_config = ConfigDict(frozen=True)

    inertia: float = Field(gt=0)
    viscous_friction: float = Field(default=0.0, ge=0)
    coulomb_friction: float = Field(default=0.0, ge=0)
    gravity: float = 0.0
    """Amplitude G of the gravity torque G*cos(angle)."""
    torque_limit: float = Field(default=5.0, gt=0)


class ArmParams(BaseModel):
    """Parameters of every joint of one arm, with vectorised views."""

    model_config = ConfigDict(frozen=True)

    joints: tuple[JointParams, ...] = Field(min_length=1)

    @property
    def joint_count(self) -> int:
        return len(self.joints)

    @cached_property
    def inertia(self) -> np.ndarray:
        return np.array([joint.inertia for joint in self.joints])

    @cached_property
    def viscous_friction(self) -> np.ndarray:
        return np.array([joint.viscous_friction for joint in self.joints])

    @cached_property
    def coulomb_friction(self) -> np.ndarray:
        return np.array([joint.coulomb_friction for joint in self.joints])

    @cached_property
    def gravity(self) -> np.ndarray:
        return np.array([joint.gravity for joint in self.joints])

    @cached_property
    def torque_limit(self) -> np.ndarray:
        return np.array([joint.torque_limit for joint in self.joints])

    def scaled(self, inertia_scale: float) -> "ArmParams":
        """Copy of these parameters with every inertia multiplied by `inertia_scale`."""
        return ArmParams(joints=tuple(
            joint.model_copy(update={"inertia": joint.inertia * inertia_scale})
            for joint in self.joints
        ))


class ArmState(BaseModel):
    """Angle, velocity and applied external torque of every joint of one arm.

    Arrays are float64 vectors of equal length; non-finite entries are rejected.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    angle: np.ndarray
    velocity: np.ndarray
    external_torque: np.ndarray

    @field_validator("angle", "velocity", "external_torque", mode="before")
    @classmethod
    def _as_vector(cls, value):
        return np.array(value, dtype=np.float64).reshape(-1)

    @model_validator(mode="after")
    def _check_shapes(self):
        n = self.angle.shape[0]
        if n == 0:
            raise ValueError("an arm needs at least one joint")
        if self.velocity.shape[0] != n or self.external_torque.shape[0] != n:
            raise ValueError(
                f"angle, velocity and external_torque lengths differ "
                f"({n}, {self.velocity.shape[0]}, {self.external_torque.shape[0]})"
            )
        for name in ("angle", "velocity", "external_torque"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"`{name}` contains non-finite values")
        return self

    @classmethod
    def at_rest(cls, angle) -> "ArmState":
        """State at `angle` with zero velocity and no external torque."""
        angle = np.array(angle, dtype=np.float64).reshape(-1)
        return cls(angle=angle, velocity=np.zeros_like(angle), external_torque=np.zeros_like(angle))

    @property
    def joint_count(self) -> int:
        return self.angle.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ArmState):
            return NotImplemented
        return (np.array_equal(self.angle, other.angle)
                and np.array_equal(self.velocity, other.velocity)
                and np.array_equal(self.external_torque, other.external_torque))
