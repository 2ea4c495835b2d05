"""Errors raised by the learning model, its training loop and checkpoints."""

from ..errors import BilatError


class PolicyError(BilatError):
    """Base class for policy failures."""


class ShapeMismatchError(PolicyError):
    def __init__(self, what: str, expected, actual):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected shape {expected}, got {actual}")


class TrainingDivergedError(PolicyError):
    """The loss became NaN or infinite."""

    def __init__(self, epoch: int, batch_index: int, value: float):
        self.epoch = epoch
        self.batch_index = batch_index
        self.value = value
        super().__init__(f"loss diverged to {value} at epoch {epoch}, batch {batch_index}")


class EncoderMismatchError(PolicyError):
    def __init__(self, trained_with: str, given: str):
        self.trained_with = trained_with
        self.given = given
        super().__init__(f"model was trained with encoder {trained_with!r}, got an embedding from {given!r}")


class CheckpointFormatError(PolicyError):
    """A checkpoint file is truncated, corrupt or of an unknown format."""
