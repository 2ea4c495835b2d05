"""The 4-channel bilateral law and the acceleration-to-torque conversion.

Differential mode drives the position error to zero; common mode drives the sum
of reaction torques to zero. Reaction torques follow the RFOB sign (reaction on
the environment), so the force loop enters with a negative sign.
"""

import numpy as np

from ..sim.params import ArmState
from .errors import JointCountMismatchError
from .gains import ControllerGains


def _split_modes(leader_angle, leader_velocity, leader_reaction, follower: ArmState,
                 follower_reaction, gains: ControllerGains) -> tuple[np.ndarray, np.ndarray]:
    n = follower.joint_count
    counts = {len(leader_angle), n, len(leader_reaction), len(follower_reaction), gains.joint_count}
    if len(counts) != 1:
        raise JointCountMismatchError(len(leader_angle), n, len(leader_reaction),
                                      len(follower_reaction), gains.joint_count)
    position_error = np.asarray(leader_angle) - follower.angle
    velocity_error = np.asarray(leader_velocity) - follower.velocity
    force_sum = np.asarray(leader_reaction) + np.asarray(follower_reaction)
    common = -(gains.kf / (2.0 * gains.inertia)) * force_sum
    differential = (gains.kp * position_error + gains.kd * velocity_error) / 2.0
    return common, differential


def four_channel_step(leader: ArmState, follower: ArmState, leader_reaction, follower_reaction,
                      gains: ControllerGains) -> tuple[np.ndarray, np.ndarray]:
    """Acceleration references (leader, follower) of one bilateral tick. Pure function."""
    if leader.joint_count != follower.joint_count:
        raise JointCountMismatchError(leader.joint_count, follower.joint_count)
    common, differential = _split_modes(leader.angle, leader.velocity, leader_reaction,
                                        follower, follower_reaction, gains)
    return common - differential, common + differential


def follower_reference(leader_angle, leader_velocity, leader_reaction, follower: ArmState,
                       follower_reaction, gains: ControllerGains) -> np.ndarray:
    """Follower acceleration reference against a virtual leader given as (angle, velocity, torque)."""
    common, differential = _split_modes(leader_angle, leader_velocity, leader_reaction,
                                        follower, follower_reaction, gains)
    return common + differential


def torque_command(acceleration_reference, disturbance, gains: ControllerGains) -> np.ndarray:
    """Motor torque J_n * ddq_ref + tau_dis, clamped to the joint torque limit."""
    raw = gains.inertia * np.asarray(acceleration_reference) + np.asarray(disturbance)
    return np.clip(raw, -gains.limit, gains.limit)


def saturated_joints(acceleration_reference, disturbance, gains: ControllerGains) -> np.ndarray:
    """Boolean mask of the joints whose torque command hits the limit."""
    raw = gains.inertia * np.asarray(acceleration_reference) + np.asarray(disturbance)
    return np.abs(raw) >= gains.limit


def current_command(torque, gains: ControllerGains) -> np.ndarray:
    """Motor current corresponding to `torque` under the configured torque constants."""
    return np.asarray(torque) / np.asarray(gains.torque_constant)
