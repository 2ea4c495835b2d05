"""Errors raised by the observers and the bilateral controller."""

from ..errors import BilatError


class ControlError(BilatError):
    """Base class for controller failures."""


class NonFiniteSignalError(ControlError):
    """A controller or observer input is NaN or infinite."""

    def __init__(self, signal: str):
        self.signal = signal
        super().__init__(f"non-finite value in controller signal `{signal}`")


class JointCountMismatchError(ControlError):
    """Leader and follower (or gains) disagree on the number of joints."""

    def __init__(self, *counts: int):
        self.counts = counts
        super().__init__(f"joint counts differ: {', '.join(str(count) for count in counts)}")
