"""Controller gains and observer configuration."""

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..sim.params import ArmParams


class ControllerGains(BaseModel):
    """Gains of the 4-channel law plus the nominal inertia and limits of each joint.

    `kd` defaults to 2*sqrt(kp) (critical damping of the differential mode).
    """

    model_config = ConfigDict(frozen=True)

    kp: float = Field(default=400.0, gt=0)
    kd: float | None = Field(default=None, gt=0)
    kf: float = Field(default=1.0, gt=0)
    nominal_inertia: tuple[float, ...]
    torque_limit: tuple[float, ...] | None = None
    torque_constant: tuple[float, ...] | None = None
    """Torque per unit current; None means a unit constant on every joint."""

    @field_validator("nominal_inertia")
    @classmethod
    def _positive_inertia(cls, value):
        if not value or any(inertia <= 0 for inertia in value):
            raise ValueError(f"nominal inertia must be positive on every joint, got {value}")
        return value

    @model_validator(mode="after")
    def _fill_defaults(self):
        n = len(self.nominal_inertia)
        if self.kd is None:
            object.__setattr__(self, "kd", 2.0 * math.sqrt(self.kp))
        for name in ("torque_limit", "torque_constant"):
            value = getattr(self, name)
            if value is None:
                object.__setattr__(self, name, (math.inf if name == "torque_limit" else 1.0,) * n)
            elif len(value) != n or any(entry <= 0 for entry in value):
                raise ValueError(f"`{name}` needs {n} positive entries, got {value}")
        return self

    @property
    def joint_count(self) -> int:
        return len(self.nominal_inertia)

    @property
    def inertia(self) -> np.ndarray:
        return np.asarray(self.nominal_inertia)

    @property
    def limit(self) -> np.ndarray:
        return np.asarray(self.torque_limit)

    @classmethod
    def for_plant(cls, params: ArmParams, **gains) -> "ControllerGains":
        """Gains whose nominal inertia and torque limits are those of `params`."""
        return cls(nominal_inertia=tuple(params.inertia.tolist()),
                   torque_limit=tuple(params.torque_limit.tolist()), **gains)


class ObserverConfig(BaseModel):
    """Disturbance-observer cutoff and the nominal plant used by the reaction-force observer."""

    model_config = ConfigDict(frozen=True)

    cutoff: float = Field(default=100.0, gt=0)
    """DOB low-pass cutoff g in rad/s."""
    nominal: ArmParams
    velocity_smoothing: float = Field(default=1e-3, gt=0)
    velocity_source: Literal["state", "difference"] = "state"
