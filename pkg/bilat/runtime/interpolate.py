"""Bridging policy-rate targets to the control rate."""

import numpy as np


def interpolate_to_control_rate(previous: np.ndarray, following: np.ndarray, phase: float) -> np.ndarray:
    """Target for a control tick at `phase` in [0, 1) between two policy-rate targets.

    Channels are (angle, velocity, torque) triples along the last axis: angles and
    velocities are interpolated linearly, torques hold the previous value.
    """
    previous = np.asarray(previous, dtype=np.float64)
    following = np.asarray(following, dtype=np.float64)
    if previous.shape != following.shape:
        raise ValueError(f"targets differ in shape: {previous.shape} vs {following.shape}")
    if previous.shape[-1] % 3:
        raise ValueError(f"{previous.shape[-1]} channels are not (angle, velocity, torque) triples")
    if not 0.0 <= phase < 1.0:
        raise ValueError(f"phase {phase} is outside [0, 1)")
    result = previous + phase * (following - previous)
    result[..., 2::3] = previous[..., 2::3]
    return result
