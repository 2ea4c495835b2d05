"""Symbolic object locations, scene events and the task-object update step."""

from enum import Enum
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, ConfigDict, Field

from .contact import ContactObject, SpongeCoupling
from .params import ArmState

if TYPE_CHECKING:
    from .tasks import TaskConfig


class Location(str, Enum):
    SOURCE = "source"
    IN_GRIPPER = "in_gripper"
    STACKED = "stacked"
    TABLE = "table"


class SceneEvent(BaseModel):
    """Timestamped event such as a grasp, a stack, a crush or a slip."""

    model_config = ConfigDict(frozen=True)

    time: float
    kind: str
    subject: str
    detail: dict[str, Any] = Field(default_factory=dict)


class SceneState(BaseModel):
    """Follower arm states plus the symbolic state of every task object.

    `contacts` and `coupling` are the live, per-episode contact models; their
    latched flags (crushed, slipped) are mirrored into `events`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    task: str
    arms: list[ArmState]
    locations: dict[str, Location]
    grasped: bool = False
    time: float = 0.0
    events: list[SceneEvent] = Field(default_factory=list)
    contacts: dict[str, ContactObject] = Field(default_factory=dict)
    coupling: SpongeCoupling | None = None

    def has_event(self, kind: str) -> bool:
        return any(event.kind == kind for event in self.events)

    def first_event(self, kind: str) -> SceneEvent | None:
        for event in self.events:
            if event.kind == kind:
                return event
        return None

    @property
    def crushed(self) -> bool:
        return any(obj.crushed for obj in self.contacts.values())

    @property
    def slipped(self) -> bool:
        return self.coupling is not None and self.coupling.slipped

    def with_event(self, kind: str, subject: str, **detail) -> "SceneState":
        """Copy of the scene with one more event stamped at the current time."""
        event = SceneEvent(time=self.time, kind=kind, subject=subject, detail=detail)
        return self.model_copy(update={"events": [*self.events, event]})

    def scene_log(self) -> list[dict[str, Any]]:
        return [event.model_dump(mode="json") for event in self.events]


def update_task_objects(scene: SceneState, arms: list[ArmState], grip_torques: list[float],
                        config: "TaskConfig") -> SceneState:
    """Apply the task's event rules to `scene` given the current follower arms.

    `grip_torques` holds, per follower arm, the magnitude of the contact torque
    on its gripper. Returns a new SceneState; the input is left untouched.
    """
    return config.update_scene(scene.model_copy(update={"arms": list(arms)}), grip_torques)
