"""Disturbance observer (DOB) and reaction-force observer (RFOB).

Both work element-wise, so a state may cover one arm ([N]) or several ([A, N]).
The RFOB output is the reaction torque the arm exerts on its surroundings:
the negative of the external torque applied to the plant.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..sim.dynamics import friction_and_gravity
from .errors import NonFiniteSignalError
from .gains import ObserverConfig


class ObserverState(BaseModel):
    """Low-pass accumulator and latest estimates of every joint."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    accumulator: np.ndarray
    disturbance: np.ndarray
    reaction: np.ndarray

    @classmethod
    def zeros(cls, shape) -> "ObserverState":
        return cls(accumulator=np.zeros(shape), disturbance=np.zeros(shape), reaction=np.zeros(shape))


def dob_update(obs: ObserverState, torque_command, velocity, cfg: ObserverConfig,
               dt: float) -> tuple[ObserverState, np.ndarray]:
    """One velocity-form DOB step; returns the new state and the disturbance estimate."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    torque_command = np.asarray(torque_command, dtype=np.float64)
    velocity = np.asarray(velocity, dtype=np.float64)
    for name, value in (("torque_command", torque_command), ("velocity", velocity)):
        if not np.all(np.isfinite(value)):
            raise NonFiniteSignalError(name)
    g = cfg.cutoff
    momentum = g * cfg.nominal.inertia * velocity
    accumulator = obs.accumulator + dt * g * (torque_command + momentum - obs.accumulator)
    disturbance = accumulator - momentum
    state = ObserverState.model_construct(accumulator=accumulator, disturbance=disturbance,
                                          reaction=obs.reaction)
    return state, disturbance


def rfob_update(disturbance, angle, velocity, cfg: ObserverConfig) -> np.ndarray:
    """Reaction torque: the disturbance estimate minus modelled friction and gravity."""
    disturbance = np.asarray(disturbance, dtype=np.float64)
    if not np.all(np.isfinite(disturbance)):
        raise NonFiniteSignalError("disturbance")
    model = friction_and_gravity(cfg.nominal, np.asarray(angle, dtype=np.float64),
                                 np.asarray(velocity, dtype=np.float64), cfg.velocity_smoothing)
    return disturbance - model
