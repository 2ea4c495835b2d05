"""Sensorless 4-channel bilateral control: DOB, RFOB and the acceleration-based law."""

from .controller import ArmObserver, BilateralController, ControlTelemetry
from .errors import ControlError, JointCountMismatchError, NonFiniteSignalError
from .four_channel import (current_command, follower_reference, four_channel_step,
                           saturated_joints, torque_command)
from .gains import ControllerGains, ObserverConfig
from .observers import ObserverState, dob_update, rfob_update

__all__ = [
    "ArmObserver",
    "BilateralController",
    "ControlError",
    "ControlTelemetry",
    "ControllerGains",
    "JointCountMismatchError",
    "NonFiniteSignalError",
    "ObserverConfig",
    "ObserverState",
    "current_command",
    "dob_update",
    "follower_reference",
    "four_channel_step",
    "rfob_update",
    "saturated_joints",
    "torque_command",
]
