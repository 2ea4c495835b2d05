"""Errors raised by the physics and rendering layer."""

from ..errors import BilatError


class SimulationError(BilatError):
    """Base class for simulation failures."""


class NonFiniteStateError(SimulationError):
    """An input or an integrated state contains NaN or infinity."""

    def __init__(self, quantity: str, time: float | None = None):
        self.quantity = quantity
        self.time = time
        where = "" if time is None else f" at t={time:.4f}s"
        super().__init__(f"non-finite value in `{quantity}`{where}")


class UnknownCameraError(SimulationError):
    """The requested camera index does not exist for the task."""

    def __init__(self, camera_id: int, camera_count: int):
        self.camera_id = camera_id
        self.camera_count = camera_count
        super().__init__(f"camera {camera_id} does not exist (task has {camera_count} cameras)")
