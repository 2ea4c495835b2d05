"""Per-joint rigid-body integration of one arm.

Each joint obeys

    J * ddq = tau_motor + tau_ext - D * dq - tau_c * tanh(dq / eps) - G * cos(q)

with the motor torque clamped to the joint torque limit, integrated with
semi-implicit Euler (velocity first, then angle with the new velocity).
"""

import logging

import numpy as np

from ..utils.arrays import as_vector, first_non_finite
from .errors import NonFiniteStateError
from .params import ArmParams, ArmState


logger = logging.getLogger(__name__)

VELOCITY_SMOOTHING = 1e-3
"""Velocity scale (rad/s) of the tanh approximation of Coulomb friction."""


def friction_and_gravity(params: ArmParams, angle: np.ndarray, velocity: np.ndarray,
                         velocity_smoothing: float = VELOCITY_SMOOTHING) -> np.ndarray:
    """Torque drawn by viscous friction, smoothed Coulomb friction and gravity."""
    return (params.viscous_friction * velocity
            + params.coulomb_friction * np.tanh(velocity / velocity_smoothing)
            + params.gravity * np.cos(angle))


def step_dynamics(state: ArmState, params: ArmParams, motor_torque, external_torque,
                  dt: float, velocity_smoothing: float = VELOCITY_SMOOTHING) -> ArmState:
    """Advance `state` by one tick of length `dt`.

    The returned state records `external_torque` as the torque applied during the tick.
    Raises NonFiniteStateError when an input or the integrated state is not finite.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n = params.joint_count
    if state.joint_count != n:
        raise ValueError(f"state has {state.joint_count} joints, parameters describe {n}")
    motor = as_vector("motor_torque", motor_torque, n)
    external = as_vector("external_torque", external_torque, n)
    bad = first_non_finite(motor_torque=motor, external_torque=external)
    if bad is not None:
        raise NonFiniteStateError(bad)

    motor = np.clip(motor, -params.torque_limit, params.torque_limit)
    drag = friction_and_gravity(params, state.angle, state.velocity, velocity_smoothing)
    acceleration = (motor + external - drag) / params.inertia
    velocity = state.velocity + dt * acceleration
    angle = state.angle + dt * velocity

    bad = first_non_finite(angle=angle, velocity=velocity)
    if bad is not None:
        logger.warning("integration produced non-finite %s", bad)
        raise NonFiniteStateError(bad)
    return ArmState.model_construct(angle=angle, velocity=velocity, external_torque=external)
