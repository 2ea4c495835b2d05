"""A running simulation instance: leader and follower plants plus the task scene."""

import logging

import numpy as np

from .camera import CameraFrame, render_camera
from .dynamics import step_dynamics
from .params import ArmParams, ArmState
from .scene import SceneState, update_task_objects
from .tasks import TaskConfig


logger = logging.getLogger(__name__)


class Simulation:
    """Owns every arm plant and the scene of one episode.

    Leader arms exist only for teleoperation; autonomous rollouts step the
    followers alone. Instances share no mutable state.
    """

    def __init__(self, task: TaskConfig, with_leaders: bool = True):
        self.task = task
        self.with_leaders = with_leaders
        self.params: ArmParams = task.arm_params()
        self.reset()

    def reset(self, home_offsets: list[np.ndarray] | None = None) -> None:
        """Put every arm at its home pose (optionally offset) and rebuild the scene."""
        homes = self.task.home_states()
        if home_offsets is not None:
            homes = [ArmState.at_rest(arm.angle + offset) for arm, offset in zip(homes, home_offsets)]
        self.leaders: list[ArmState] = list(homes) if self.with_leaders else []
        self.followers: list[ArmState] = list(homes)
        self.scene: SceneState = self.task.initial_scene().model_copy(update={"arms": list(homes)})
        self.tick = 0
        self.grip_torques = [0.0] * len(homes)

    @property
    def time(self) -> float:
        return self.tick * self.task.dt

    def step(self, follower_motor: list[np.ndarray], leader_motor: list[np.ndarray] | None = None,
             leader_external: list[np.ndarray] | None = None) -> None:
        """Advance every plant by one tick and apply the task's event rules."""
        dt = self.task.dt
        externals, grips = self.task.follower_external_torques(self.scene, self.followers)
        self.followers = [
            step_dynamics(arm, self.params, motor, external, dt)
            for arm, motor, external in zip(self.followers, follower_motor, externals)
        ]
        if self.with_leaders:
            if leader_motor is None:
                raise ValueError("leader torques are required while leaders are simulated")
            if leader_external is None:
                leader_external = [np.zeros(self.task.joint_count) for _ in self.leaders]
            self.leaders = [
                step_dynamics(arm, self.params, motor, external, dt)
                for arm, motor, external in zip(self.leaders, leader_motor, leader_external)
            ]
        self.tick += 1
        self.grip_torques = grips
        scene = self.scene.model_copy(update={"time": self.time})
        self.scene = update_task_objects(scene, self.followers, grips, self.task)

    def render(self, camera_id: int) -> CameraFrame:
        return render_camera(self.scene, camera_id, self.task)

    def render_all(self) -> list[np.ndarray]:
        return [self.render(camera_id).as_array() for camera_id in range(self.task.camera_count)]
