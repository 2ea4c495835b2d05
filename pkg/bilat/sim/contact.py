"""Gripper contact with deformable objects and the two-handed sponge coupling."""

import logging

import numpy as np
from pydantic import BaseModel, Field


logger = logging.getLogger(__name__)


class ContactObject(BaseModel):
    """A compliant object squeezed by a gripper closing past `engage_angle`.

    `crushed` latches once the deformation exceeds `crush_deformation`.
    """

    engage_angle: float
    stiffness: float = Field(ge=0)
    quadratic_stiffness: float = Field(default=0.0, ge=0)
    damping: float = Field(default=0.0, ge=0)
    crush_deformation: float = Field(gt=0)
    crushed: bool = False

    def deformation(self, gripper_angle: float) -> float:
        return max(0.0, gripper_angle - self.engage_angle)

    def equilibrium_angle(self, torque: float) -> float:
        """Gripper angle at which the static contact torque magnitude equals `torque`."""
        if torque <= 0:
            return self.engage_angle
        if self.quadratic_stiffness == 0:
            return self.engage_angle + torque / self.stiffness
        a, b = self.quadratic_stiffness, self.stiffness
        return self.engage_angle + (-b + np.sqrt(b * b + 4 * a * torque)) / (2 * a)


def contact_torque(obj: ContactObject, gripper_angle: float, gripper_velocity: float) -> float:
    """Reaction torque of `obj` on the gripper joint (never positive).

    Zero while the gripper is open past the engage angle; sets `obj.crushed`
    the first time the deformation exceeds the crush threshold.
    """
    x = obj.deformation(gripper_angle)
    if x <= 0.0:
        return 0.0
    if x > obj.crush_deformation and not obj.crushed:
        obj.crushed = True
        logger.info("object crushed", extra={"fields": {"deformation": round(x, 4)}})
    torque = -(obj.stiffness * x + obj.quadratic_stiffness * x * x + obj.damping * gripper_velocity)
    return min(torque, 0.0)


class SpongeCoupling(BaseModel):
    """Torsional spring through a sponge held by both grippers.

    Twist is the left wrist roll minus the right wrist roll. The coupling sticks
    while the spring torque stays within `slip_coefficient` times the weaker grip;
    past that it slips for good and transmits only the friction limit.

    The two grips it compares are not held here: the left and right gripper
    `ContactObject`s live in `SceneState.contacts` under "left" and "right",
    next to this coupling in `SceneState.coupling`, and their torques are passed
    to `sponge_coupling_torques` on every step.
    """

    torsional_stiffness: float = Field(ge=0)
    torsional_damping: float = Field(default=0.0, ge=0)
    rest_twist: float = 0.0
    slip_coefficient: float = Field(gt=0)
    slipped: bool = False

    def twist(self, left_wrist_angle: float, right_wrist_angle: float) -> float:
        return left_wrist_angle - right_wrist_angle


def sponge_coupling_torques(coupling: SpongeCoupling,
                            left_wrist: tuple[float, float],
                            right_wrist: tuple[float, float],
                            grip_torques: tuple[float, float]) -> tuple[float, float]:
    """Torques on the left and right wrist joints from a sponge held by both grippers.

    `left_wrist` and `right_wrist` are (angle, velocity) pairs, `grip_torques` the
    contact torques currently squeezing the sponge on each side.
    """
    left_grip, right_grip = abs(grip_torques[0]), abs(grip_torques[1])
    if left_grip <= 0.0 or right_grip <= 0.0:
        logger.debug("sponge coupling idle: both grippers must hold the sponge",
                     extra={"fields": {"left_grip": left_grip, "right_grip": right_grip}})
        return 0.0, 0.0

    twist = coupling.twist(left_wrist[0], right_wrist[0])
    twist_rate = left_wrist[1] - right_wrist[1]
    spring = (coupling.torsional_stiffness * (twist - coupling.rest_twist)
              + coupling.torsional_damping * twist_rate)
    limit = coupling.slip_coefficient * min(left_grip, right_grip)
    if coupling.slipped or abs(spring) > limit:
        if not coupling.slipped:
            coupling.slipped = True
            logger.info("sponge slipped", extra={"fields": {"twist": round(twist, 4),
                                                            "limit": round(limit, 4)}})
        spring = float(np.sign(spring)) * min(abs(spring), limit)
    return -spring, spring
