"""Joint-space arm dynamics, deformable contact, task-object logic and synthetic cameras."""

from .camera import CameraFrame, CameraView, render_camera
from .contact import ContactObject, SpongeCoupling, contact_torque, sponge_coupling_torques
from .dynamics import step_dynamics
from .errors import NonFiniteStateError, SimulationError, UnknownCameraError
from .params import ArmParams, ArmState, JointParams
from .scene import Location, SceneEvent, SceneState, update_task_objects
from .tasks import CupTask, SpongeTask, TaskConfig, TaskSelection, get_task_preset
from .world import Simulation

__all__ = [
    "ArmParams",
    "ArmState",
    "CameraFrame",
    "CameraView",
    "ContactObject",
    "CupTask",
    "JointParams",
    "Location",
    "NonFiniteStateError",
    "SceneEvent",
    "SceneState",
    "SimulationError",
    "Simulation",
    "SpongeCoupling",
    "SpongeTask",
    "TaskConfig",
    "TaskSelection",
    "UnknownCameraError",
    "contact_torque",
    "get_task_preset",
    "render_camera",
    "sponge_coupling_torques",
    "step_dynamics",
    "update_task_objects",
]
