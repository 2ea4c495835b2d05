"""Task presets: plant, poses, contact objects and event rules of each simulated task."""

import logging
from abc import ABC, abstractmethod
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .contact import ContactObject, SpongeCoupling, contact_torque, sponge_coupling_torques
from .params import ArmParams, ArmState, JointParams
from .scene import Location, SceneState


logger = logging.getLogger(__name__)


def _within(angles: np.ndarray, pose: list[float], tolerance: float) -> bool:
    pose = np.asarray(pose, dtype=np.float64)
    return bool(np.max(np.abs(angles[: pose.shape[0]] - pose)) <= tolerance)


class TaskConfig(BaseModel, ABC):
    """Shared fields of every task; subclasses add poses, objects and event rules."""

    model_config = ConfigDict(frozen=True)

    task: str
    joints: tuple[JointParams, ...]
    arms_per_side: int = Field(ge=1, le=2)
    dt: float = Field(default=1e-3, gt=0)
    image_rate: int = Field(default=100, gt=0)
    camera_count: int = Field(ge=1)
    image_width: int = Field(default=64, ge=8)
    image_height: int = Field(default=48, ge=8)
    home_pose: list[list[float]]
    """Full joint vector (gripper included) of every arm at episode start."""
    gripper_open: float
    hold_threshold: float = Field(default=0.01, gt=0)
    pose_tolerance: float = Field(default=0.05, gt=0)

    @model_validator(mode="after")
    def _check_task(self):
        n = len(self.joints)
        if len(self.home_pose) != self.arms_per_side:
            raise ValueError(f"home_pose lists {len(self.home_pose)} arms, expected {self.arms_per_side}")
        for pose in self.home_pose:
            if len(pose) != n:
                raise ValueError(f"home pose {pose} does not have {n} joints")
        rate = 1.0 / self.dt
        if abs(rate - round(rate)) > 1e-6 or round(rate) % self.image_rate:
            raise ValueError(f"control rate {rate:g} Hz is not a multiple of image rate {self.image_rate} Hz")
        return self

    @property
    def name(self) -> str:
        return self.task

    @property
    def joint_count(self) -> int:
        return len(self.joints)

    @property
    def gripper_index(self) -> int:
        return len(self.joints) - 1

    @property
    def control_rate(self) -> int:
        return int(round(1.0 / self.dt))

    @property
    def ticks_per_frame(self) -> int:
        return self.control_rate // self.image_rate

    def arm_params(self) -> ArmParams:
        return ArmParams(joints=self.joints)

    def home_states(self) -> list[ArmState]:
        return [ArmState.at_rest(pose) for pose in self.home_pose]

    @abstractmethod
    def initial_scene(self) -> SceneState:
        """Fresh scene with objects at their start locations and pristine contact models."""

    @abstractmethod
    def follower_external_torques(self, scene: SceneState,
                                  followers: list[ArmState]) -> tuple[list[np.ndarray], list[float]]:
        """External torque vector on every follower arm, and the grip torque magnitude per arm."""

    @abstractmethod
    def update_scene(self, scene: SceneState, grip_torques: list[float]) -> SceneState:
        """Event rules applied after each physics step."""


class CupTask(TaskConfig):
    """Unimanual cup stacking: pick the cup at the source, carry it over the apex, place it."""

    task: Literal["cup"] = "cup"
    joints: tuple[JointParams, ...] = (
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.0, torque_limit=5.0),
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.3, torque_limit=5.0),
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.15, torque_limit=5.0),
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.05, torque_limit=5.0),
        JointParams(inertia=0.01, viscous_friction=0.01, coulomb_friction=0.002, gravity=0.0, torque_limit=1.0),
    )
    arms_per_side: int = 1
    camera_count: int = 3
    home_pose: list[list[float]] = [[0.0, 0.9, -0.6, -0.3, 2.30]]
    gripper_open: float = 2.30
    pick_pose: list[float] = [0.35, 0.6, -0.9, 0.3]
    apex_pose: list[float] = [0.0, 1.1, -0.5, -0.6]
    place_pose: list[float] = [-0.35, 0.7, -0.8, 0.1]
    cup: ContactObject = ContactObject(engage_angle=2.40, stiffness=2.0, quadratic_stiffness=8.0,
                                       damping=0.05, crush_deformation=0.45)

    def initial_scene(self) -> SceneState:
        return SceneState(
            task=self.task,
            arms=self.home_states(),
            locations={"cup": Location.SOURCE},
            contacts={"cup": self.cup.model_copy(update={"crushed": False})},
        )

    def _cup_between_fingers(self, scene: SceneState, arm: ArmState) -> bool:
        location = scene.locations["cup"]
        if location == Location.IN_GRIPPER:
            return True
        return location == Location.SOURCE and _within(arm.angle, self.pick_pose, self.pose_tolerance)

    def follower_external_torques(self, scene, followers):
        arm = followers[0]
        external = np.zeros(self.joint_count)
        grip = 0.0
        if self._cup_between_fingers(scene, arm):
            g = self.gripper_index
            external[g] = contact_torque(scene.contacts["cup"], arm.angle[g], arm.velocity[g])
            grip = -external[g]
        return [external], [grip]

    def update_scene(self, scene, grip_torques):
        arm = scene.arms[0]
        grip = grip_torques[0]
        cup = scene.contacts["cup"]
        location = scene.locations["cup"]
        g = self.gripper_index

        if cup.crushed and not scene.has_event("crush"):
            scene = scene.with_event("crush", "cup", deformation=cup.deformation(arm.angle[g]))
            logger.warning("cup crushed", extra={"fields": {"time": round(scene.time, 3)}})

        if location == Location.SOURCE:
            if (_within(arm.angle, self.pick_pose, self.pose_tolerance)
                    and arm.angle[g] > cup.engage_angle and grip >= self.hold_threshold):
                scene = scene.model_copy(update={
                    "locations": {**scene.locations, "cup": Location.IN_GRIPPER}, "grasped": True,
                })
                scene = scene.with_event("grasp", "cup", grip_torque=grip)
        elif location == Location.IN_GRIPPER:
            if grip < self.hold_threshold:
                placed = _within(arm.angle, self.place_pose, self.pose_tolerance)
                target = Location.STACKED if placed else Location.TABLE
                scene = scene.model_copy(update={
                    "locations": {**scene.locations, "cup": target}, "grasped": False,
                })
                scene = scene.with_event("stack" if placed else "drop", "cup")
                if not placed:
                    logger.warning("cup released away from the place pose",
                                   extra={"fields": {"time": round(scene.time, 3)}})
            elif not scene.has_event("apex") and _within(arm.angle, self.apex_pose, self.pose_tolerance):
                scene = scene.with_event("apex", "cup")
        elif location == Location.STACKED:
            if arm.angle[g] < cup.engage_angle and not scene.has_event("reopen"):
                scene = scene.with_event("reopen", "gripper")
        return scene


class SpongeTask(TaskConfig):
    """Bimanual sponge twisting: grab with both grippers, lift, twist the wrists apart."""

    task: Literal["sponge"] = "sponge"
    joints: tuple[JointParams, ...] = (
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.0, torque_limit=5.0),
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.3, torque_limit=5.0),
        JointParams(inertia=0.05, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.15, torque_limit=5.0),
        JointParams(inertia=0.04, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.05, torque_limit=5.0),
        JointParams(inertia=0.03, viscous_friction=0.02, coulomb_friction=0.005, gravity=0.0, torque_limit=5.0),
        JointParams(inertia=0.02, viscous_friction=0.01, coulomb_friction=0.002, gravity=0.0, torque_limit=2.0),
        JointParams(inertia=0.01, viscous_friction=0.01, coulomb_friction=0.002, gravity=0.0, torque_limit=1.0),
    )
    arms_per_side: int = 2
    camera_count: int = 4
    home_pose: list[list[float]] = [
        [0.2, 0.9, -0.6, -0.3, 0.0, 0.0, 2.9],
        [-0.2, 0.9, -0.6, -0.3, 0.0, 0.0, 2.9],
    ]
    gripper_open: float = 2.9
    wrist_index: int = 5
    grab_pose: list[list[float]] = [[0.1, 0.6, -0.9, 0.3, 0.0], [-0.1, 0.6, -0.9, 0.3, 0.0]]
    lift_pose: list[list[float]] = [[0.1, 0.9, -0.7, -0.2, 0.0], [-0.1, 0.9, -0.7, -0.2, 0.0]]
    twist_goal: float = Field(default=0.15, gt=0)
    grip: ContactObject = ContactObject(engage_angle=3.0, stiffness=0.4, quadratic_stiffness=0.5,
                                        damping=0.02, crush_deformation=0.8)
    coupling: SpongeCoupling = SpongeCoupling(torsional_stiffness=0.1, slip_coefficient=1.0)

    def initial_scene(self) -> SceneState:
        return SceneState(
            task=self.task,
            arms=self.home_states(),
            locations={"sponge": Location.SOURCE},
            contacts={"left": self.grip.model_copy(update={"crushed": False}),
                      "right": self.grip.model_copy(update={"crushed": False})},
            coupling=self.coupling.model_copy(update={"slipped": False}),
        )

    def twist(self, arms: list[ArmState]) -> float:
        return float(arms[0].angle[self.wrist_index] - arms[1].angle[self.wrist_index])

    def follower_external_torques(self, scene, followers):
        externals = [np.zeros(self.joint_count) for _ in followers]
        grips = [0.0, 0.0]
        held = scene.locations["sponge"] == Location.IN_GRIPPER
        g, w = self.gripper_index, self.wrist_index
        for side, (name, arm) in enumerate(zip(("left", "right"), followers)):
            if held or (scene.locations["sponge"] == Location.SOURCE
                        and _within(arm.angle, self.grab_pose[side], self.pose_tolerance)):
                externals[side][g] = contact_torque(scene.contacts[name], arm.angle[g], arm.velocity[g])
                grips[side] = -externals[side][g]
        if held:
            left, right = followers
            torque_left, torque_right = sponge_coupling_torques(
                scene.coupling,
                (left.angle[w], left.velocity[w]),
                (right.angle[w], right.velocity[w]),
                (grips[0], grips[1]),
            )
            externals[0][w] += torque_left
            externals[1][w] += torque_right
        return externals, grips

    def update_scene(self, scene, grip_torques):
        left, right = scene.arms
        location = scene.locations["sponge"]
        g = self.gripper_index
        engaged = all(grip >= self.hold_threshold for grip in grip_torques)

        if scene.crushed and not scene.has_event("crush"):
            scene = scene.with_event("crush", "sponge")
            logger.warning("sponge crushed", extra={"fields": {"time": round(scene.time, 3)}})
        if scene.slipped and not scene.has_event("slip"):
            scene = scene.with_event("slip", "sponge", twist=self.twist(scene.arms))
            logger.warning("sponge slipped out of the grip", extra={"fields": {"time": round(scene.time, 3)}})

        if location == Location.SOURCE:
            at_grab = all(_within(arm.angle, pose, self.pose_tolerance)
                          for arm, pose in zip(scene.arms, self.grab_pose))
            closed = all(arm.angle[g] > self.grip.engage_angle for arm in scene.arms)
            if at_grab and closed and engaged:
                scene = scene.model_copy(update={
                    "locations": {**scene.locations, "sponge": Location.IN_GRIPPER}, "grasped": True,
                })
                scene = scene.with_event("grab", "sponge", grip_torques=list(grip_torques))
        elif location == Location.IN_GRIPPER:
            if not engaged:
                scene = scene.model_copy(update={
                    "locations": {**scene.locations, "sponge": Location.TABLE}, "grasped": False,
                })
                scene = scene.with_event("release", "sponge")
            else:
                if not scene.has_event("lift") and all(
                        _within(arm.angle, pose, self.pose_tolerance)
                        for arm, pose in zip((left, right), self.lift_pose)):
                    scene = scene.with_event("lift", "sponge")
                twist = self.twist(scene.arms) - scene.coupling.rest_twist
                if (scene.has_event("lift") and not scene.has_event("twist")
                        and abs(twist) >= self.twist_goal and not scene.slipped):
                    scene = scene.with_event("twist", "sponge", twist=twist)
        return scene


TaskSelection = Annotated[Union[CupTask, SpongeTask], Field(discriminator="task")]

_TASK_CLASSES: tuple[type[TaskConfig], ...] = (CupTask, SpongeTask)


def get_task_preset(name: str) -> TaskConfig:
    """Return the default configuration of the task called `name` ('cup' or 'sponge')."""
    for task_cls in _TASK_CLASSES:
        if task_cls.model_fields["task"].default == name:
            return task_cls()
    raise ValueError(f"Unsupported task: {name}")
