"""Autonomous execution: chunk ensembling, rate bridging, the follower tick and full rollouts."""

from .ensemble import EnsembleState, PendingChunk, temporal_ensemble
from .interpolate import interpolate_to_control_rate
from .mailbox import Mailbox, PolicyWorker
from .rollout import RolloutConfig, home_offsets, run_rollout
from .telemetry import TelemetryRecorder
from .tick import autonomous_tick


__all__ = [
    "EnsembleState",
    "Mailbox",
    "PendingChunk",
    "PolicyWorker",
    "RolloutConfig",
    "TelemetryRecorder",
    "autonomous_tick",
    "home_offsets",
    "interpolate_to_control_rate",
    "run_rollout",
    "temporal_ensemble",
]
