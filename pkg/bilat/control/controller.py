"""Stateful bilateral controller: observers, the 4-channel law and per-tick telemetry."""

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..sim.params import ArmState
from .errors import JointCountMismatchError
from .four_channel import (follower_reference, four_channel_step, saturated_joints,
                           torque_command)
from .gains import ControllerGains, ObserverConfig
from .observers import ObserverState, dob_update, rfob_update


logger = logging.getLogger(__name__)


class ControlTelemetry(BaseModel):
    """Signals of one control tick; arrays are shaped [arms, joints]."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    tick: int
    leader_reference: np.ndarray | None = None
    follower_reference: np.ndarray
    leader_command: np.ndarray | None = None
    follower_command: np.ndarray
    leader_reaction: np.ndarray | None = None
    follower_reaction: np.ndarray
    saturated: np.ndarray


class ArmObserver:
    """DOB and RFOB of one arm, fed with the command applied on the previous tick."""

    def __init__(self, cfg: ObserverConfig, dt: float):
        self.cfg = cfg
        self.dt = dt
        self.reset()

    def reset(self) -> None:
        n = self.cfg.nominal.joint_count
        self.state = ObserverState.zeros(n)
        self.last_command = np.zeros(n)
        self.last_angle: np.ndarray | None = None

    def _velocity(self, arm: ArmState) -> np.ndarray:
        if self.cfg.velocity_source == "state":
            return arm.velocity
        if self.last_angle is None:
            return np.zeros_like(arm.angle)
        return (arm.angle - self.last_angle) / self.dt

    def estimate(self, arm: ArmState) -> tuple[np.ndarray, np.ndarray]:
        """Update both observers from `arm`; returns (disturbance, reaction)."""
        if arm.joint_count != self.cfg.nominal.joint_count:
            raise JointCountMismatchError(arm.joint_count, self.cfg.nominal.joint_count)
        velocity = self._velocity(arm)
        self.state, disturbance = dob_update(self.state, self.last_command, velocity, self.cfg, self.dt)
        reaction = rfob_update(disturbance, arm.angle, velocity, self.cfg)
        self.state = self.state.model_copy(update={"reaction": reaction})
        self.last_angle = arm.angle
        return disturbance, reaction

    @property
    def reaction(self) -> np.ndarray:
        return self.state.reaction


class BilateralController:
    """Runs the observers and the 4-channel law for every leader/follower pair.

    Call `observe` once per tick before asking for commands; `teleoperate`
    covers leader and follower, `autonomous` drives the followers toward
    virtual leader targets.
    """

    def __init__(self, gains: ControllerGains, observer: ObserverConfig, arm_count: int, dt: float):
        if gains.joint_count != observer.nominal.joint_count:
            raise JointCountMismatchError(gains.joint_count, observer.nominal.joint_count)
        self.gains = gains
        self.observer = observer
        self.dt = dt
        self.leaders = [ArmObserver(observer, dt) for _ in range(arm_count)]
        self.followers = [ArmObserver(observer, dt) for _ in range(arm_count)]
        self.tick = 0
        self._saturated_ticks = 0

    def reset(self) -> None:
        for loop in (*self.leaders, *self.followers):
            loop.reset()
        self.tick = 0
        self._saturated_ticks = 0

    def observe(self, followers: list[ArmState], leaders: list[ArmState] | None = None):
        """Refresh every observer; returns (leader reactions or None, follower reactions)."""
        follower_estimates = [loop.estimate(arm) for loop, arm in zip(self.followers, followers)]
        leader_estimates = None
        if leaders is not None:
            leader_estimates = [loop.estimate(arm) for loop, arm in zip(self.leaders, leaders)]
        reactions = (None if leader_estimates is None
                     else np.stack([reaction for _, reaction in leader_estimates]))
        return reactions, np.stack([reaction for _, reaction in follower_estimates])

    def _command(self, loop: ArmObserver, reference: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        disturbance = loop.state.disturbance
        command = torque_command(reference, disturbance, self.gains)
        loop.last_command = command
        return command, saturated_joints(reference, disturbance, self.gains)

    def _note_saturation(self, saturated: np.ndarray) -> None:
        if saturated.any():
            self._saturated_ticks += 1
            if self._saturated_ticks == 50:
                logger.warning("torque commands saturated for 50 consecutive ticks",
                               extra={"fields": {"tick": self.tick}})
        else:
            self._saturated_ticks = 0

    def teleoperate(self, leaders: list[ArmState], followers: list[ArmState]) -> ControlTelemetry:
        """Commands of one teleoperation tick, using the reactions from the last `observe`."""
        leader_refs, follower_refs, leader_cmds, follower_cmds, flags = [], [], [], [], []
        for leader, follower, leader_loop, follower_loop in zip(leaders, followers,
                                                                self.leaders, self.followers):
            leader_ref, follower_ref = four_channel_step(
                leader, follower, leader_loop.reaction, follower_loop.reaction, self.gains)
            leader_cmd, leader_sat = self._command(leader_loop, leader_ref)
            follower_cmd, follower_sat = self._command(follower_loop, follower_ref)
            leader_refs.append(leader_ref)
            follower_refs.append(follower_ref)
            leader_cmds.append(leader_cmd)
            follower_cmds.append(follower_cmd)
            flags.append(leader_sat | follower_sat)
        saturated = np.stack(flags)
        self._note_saturation(saturated)
        telemetry = ControlTelemetry.model_construct(
            tick=self.tick,
            leader_reference=np.stack(leader_refs),
            follower_reference=np.stack(follower_refs),
            leader_command=np.stack(leader_cmds),
            follower_command=np.stack(follower_cmds),
            leader_reaction=np.stack([loop.reaction for loop in self.leaders]),
            follower_reaction=np.stack([loop.reaction for loop in self.followers]),
            saturated=saturated,
        )
        self.tick += 1
        return telemetry

    def autonomous(self, targets: list[np.ndarray], followers: list[ArmState]) -> ControlTelemetry:
        """Follower commands toward leader targets, one [joints, 3] array per arm."""
        refs, cmds, flags = [], [], []
        for target, follower, loop in zip(targets, followers, self.followers):
            target = np.asarray(target, dtype=np.float64)
            ref = follower_reference(target[:, 0], target[:, 1], target[:, 2],
                                     follower, loop.reaction, self.gains)
            cmd, sat = self._command(loop, ref)
            refs.append(ref)
            cmds.append(cmd)
            flags.append(sat)
        saturated = np.stack(flags)
        self._note_saturation(saturated)
        telemetry = ControlTelemetry.model_construct(
            tick=self.tick,
            follower_reference=np.stack(refs),
            follower_command=np.stack(cmds),
            follower_reaction=np.stack([loop.reaction for loop in self.followers]),
            saturated=saturated,
            leader_reference=None, leader_command=None, leader_reaction=None,
        )
        self.tick += 1
        return telemetry
