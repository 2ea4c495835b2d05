"""Scripted human operators driving the leader arms during teleoperation."""

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..control.gains import ControllerGains
from ..sim.contact import ContactObject, contact_torque
from ..sim.params import ArmState
from ..sim.tasks import CupTask, SpongeTask, TaskConfig


logger = logging.getLogger(__name__)


class ExpertTargets(BaseModel):
    """What the expert aims for under one instruction."""

    model_config = ConfigDict(frozen=True)

    torque_target: float = Field(gt=0)
    """Grip torque (N·m) at which the expert stops closing the gripper."""
    twist: float = 0.0
    """Total wrist twist (rad) of the bimanual task."""


class ScriptPhase(BaseModel):
    """One segment of a demonstration.

    Arm joints move to `arm_targets` (one vector per arm, gripper excluded) along a
    minimum-jerk profile; `None` keeps them where the previous phase left them.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    duration: float = Field(gt=0)
    arm_targets: list[list[float]] | None = None
    gripper: Literal["hold", "open", "close"] = "hold"
    close_velocity: float = Field(default=0.15, gt=0)


class ExpertScript(BaseModel):
    model_config = ConfigDict(frozen=True)

    phases: list[ScriptPhase] = Field(min_length=1)
    torque_target: float = Field(gt=0)
    gripper_open: float

    @property
    def duration(self) -> float:
        return sum(phase.duration for phase in self.phases)


class OperatorConfig(BaseModel):
    """Impedance of the simulated hand on the leader, relative to the mass felt through the loop."""

    model_config = ConfigDict(frozen=True)

    natural_frequency: float = Field(default=25.0, gt=0)
    damping_ratio: float = Field(default=1.0, gt=0)
    pose_jitter: float = Field(default=0.01, ge=0)
    """Half-width (rad) of the uniform perturbation applied to every pose target."""
    timing_jitter: float = Field(default=0.05, ge=0, lt=0.5)
    """Relative half-width of the uniform perturbation applied to phase durations."""


def _crush_torque(obj: ContactObject) -> float:
    scratch = obj.model_copy()
    return -contact_torque(scratch, obj.engage_angle + obj.crush_deformation, 0.0)


def _jittered(rng: np.random.Generator, pose: list[float], amount: float) -> list[float]:
    return (np.asarray(pose) + rng.uniform(-amount, amount, len(pose))).tolist()


def build_expert_script(task: TaskConfig, targets: ExpertTargets, rng: np.random.Generator,
                        operator: OperatorConfig = OperatorConfig()) -> ExpertScript:
    """Demonstration script for `task`, perturbed by seeded pose and timing offsets."""
    def duration(nominal: float) -> float:
        return nominal * (1.0 + rng.uniform(-operator.timing_jitter, operator.timing_jitter))

    def poses(*per_arm: list[float]) -> list[list[float]]:
        return [_jittered(rng, pose, operator.pose_jitter) for pose in per_arm]

    if isinstance(task, CupTask):
        crush = _crush_torque(task.cup)
        home = task.home_pose[0][:-1]
        phases = [
            ScriptPhase(name="approach", duration=duration(2.0), arm_targets=poses(task.pick_pose)),
            ScriptPhase(name="grasp", duration=duration(1.5), gripper="close", close_velocity=0.15),
            ScriptPhase(name="move", duration=duration(2.0), arm_targets=poses(task.apex_pose)),
            ScriptPhase(name="place", duration=duration(1.5), arm_targets=poses(task.place_pose)),
            ScriptPhase(name="release", duration=duration(0.8), gripper="open"),
            ScriptPhase(name="retreat", duration=duration(1.7), arm_targets=[home]),
        ]
    elif isinstance(task, SpongeTask):
        crush = _crush_torque(task.grip)
        w = task.wrist_index
        lift = [list(pose) for pose in task.lift_pose]
        twisted = [pose[:w] + [sign * targets.twist / 2.0] for pose, sign in zip(lift, (1.0, -1.0))]
        phases = [
            ScriptPhase(name="approach", duration=duration(2.0),
                        arm_targets=[pose + [0.0] for pose in poses(*task.grab_pose)]),
            ScriptPhase(name="grab", duration=duration(2.0), gripper="close", close_velocity=0.3),
            ScriptPhase(name="lift", duration=duration(1.5),
                        arm_targets=[pose + [0.0] for pose in poses(*lift)]),
            ScriptPhase(name="twist", duration=duration(2.5), arm_targets=twisted),
        ]
    else:
        raise ValueError(f"no expert script for task {task.name}")
    if targets.torque_target >= crush:
        raise ValueError(f"torque target {targets.torque_target} N·m would crush the object "
                         f"(crush starts at {crush:.3f} N·m)")
    return ExpertScript(phases=phases, torque_target=targets.torque_target, gripper_open=task.gripper_open)


def minimum_jerk(progress: float) -> tuple[float, float]:
    """Position and d/dprogress of the minimum-jerk profile at `progress` in [0, 1]."""
    s = min(max(progress, 0.0), 1.0)
    position = s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)
    rate = 30.0 * s * s * (1.0 - s) ** 2
    return position, rate


class ScriptedOperator:
    """Turns an ExpertScript into hand torques on the leader arms.

    The hand is an impedance around a moving reference. While a phase closes the
    gripper, the reference advances at the close velocity until the torque felt
    on that leader reaches the script's target, then freezes.
    """

    def __init__(self, script: ExpertScript, start: list[ArmState], gains: ControllerGains,
                 cfg: OperatorConfig = OperatorConfig()):
        self.script = script
        mass = 2.0 * gains.inertia / gains.kf
        self.stiffness = mass * cfg.natural_frequency ** 2
        self.damping = 2.0 * cfg.damping_ratio * mass * cfg.natural_frequency
        self.reference = np.stack([arm.angle for arm in start])
        self.reference_velocity = np.zeros_like(self.reference)
        self._phase_index = -1
        self._phase_start_time = 0.0
        self._phase_start = self.reference.copy()
        self._frozen = [False] * len(start)
        self._boundaries = np.cumsum([phase.duration for phase in script.phases])

    def _enter(self, index: int, time: float) -> None:
        self._phase_index = index
        self._phase_start_time = time
        self._phase_start = self.reference.copy()
        self._frozen = [False] * self.reference.shape[0]
        if index < len(self.script.phases):
            logger.debug("operator phase", extra={"fields": {"phase": self.script.phases[index].name,
                                                             "time": round(time, 3)}})

    def _advance(self, time: float, felt: np.ndarray) -> None:
        index = int(np.searchsorted(self._boundaries, time, side="right"))
        if index != self._phase_index:
            self._enter(index, time)
        self.reference_velocity = np.zeros_like(self.reference)
        if index >= len(self.script.phases):
            return
        phase = self.script.phases[index]
        elapsed = time - self._phase_start_time
        progress = elapsed / phase.duration
        position, rate = minimum_jerk(progress)
        g = self.reference.shape[1] - 1
        if phase.arm_targets is not None:
            for arm, target in enumerate(phase.arm_targets):
                count = len(target)
                start = self._phase_start[arm, :count]
                delta = np.asarray(target) - start
                self.reference[arm, :count] = start + position * delta
                self.reference_velocity[arm, :count] = rate * delta / phase.duration
        if phase.gripper == "open":
            start = self._phase_start[:, g]
            delta = self.script.gripper_open - start
            self.reference[:, g] = start + position * delta
            self.reference_velocity[:, g] = rate * delta / phase.duration
        elif phase.gripper == "close":
            for arm in range(self.reference.shape[0]):
                if not self._frozen[arm] and felt[arm] >= self.script.torque_target:
                    self._frozen[arm] = True
                    logger.debug("grip target reached", extra={"fields": {"arm": arm, "felt": float(felt[arm])}})
                if not self._frozen[arm]:
                    self.reference[arm, g] = self._phase_start[arm, g] + phase.close_velocity * elapsed
                    self.reference_velocity[arm, g] = phase.close_velocity

    def torques(self, time: float, leaders: list[ArmState], felt_grip: np.ndarray) -> list[np.ndarray]:
        """Hand torque on every leader arm at `time`.

        `felt_grip` is the grip torque each leader transmits to the hand: the
        negated leader reaction estimate on the gripper joint.
        """
        self._advance(time, np.asarray(felt_grip))
        return [
            self.stiffness * (self.reference[arm] - leader.angle)
            + self.damping * (self.reference_velocity[arm] - leader.velocity)
            for arm, leader in enumerate(leaders)
        ]
