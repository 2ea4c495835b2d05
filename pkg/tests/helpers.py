"""Shared test helpers."""

import numpy as np

from bilat.datasets.episode import Episode


def scene_event(time: float, kind: str, subject: str = "cup", **detail) -> dict:
    """A scene-log entry as recorded in episode annotations."""
    return {"time": time, "kind": kind, "subject": subject, "detail": detail}


def make_episode(samples: int = 60, *, task: str = "cup", instruction: str = "softly grasp the cup",
                 control_rate: int = 1000, image_rate: int = 100, arms: int = 1, joints: int = 5,
                 cameras: int = 1, height: int = 8, width: int = 8, seed: int = 0, start_time: float = 0.0,
                 events: list[dict] | None = None, gripper_torque=None, annotations: dict | None = None,
                 with_scene_log: bool = True) -> Episode:
    """Synthetic episode with random streams and frames.

    `gripper_torque` (a scalar or one value per sample) overwrites the follower
    gripper reaction of every arm; `events` becomes the scene log.
    """
    frames = samples * image_rate // control_rate
    assert frames * control_rate == samples * image_rate, "samples must span whole frames"
    rng = np.random.default_rng(seed)
    leader = rng.standard_normal((samples, arms, joints, 3)).astype(np.float32)
    follower = rng.standard_normal((samples, arms, joints, 3)).astype(np.float32)
    if gripper_torque is not None:
        torque = np.broadcast_to(np.asarray(gripper_torque, dtype=np.float32).reshape(-1, 1), (samples, arms))
        follower[:, :, -1, 2] = torque
    notes = dict(annotations or {})
    if with_scene_log:
        notes.setdefault("scene_log", list(events or []))
    return Episode(
        task=task,
        instruction=instruction,
        normalized_instruction=instruction.lower(),
        control_rate=control_rate,
        image_rate=image_rate,
        joint_count=joints,
        arm_count=2 * arms,
        leader=leader,
        follower=follower,
        frames=[rng.integers(0, 256, (frames, height, width, 3), dtype=np.uint8) for _ in range(cameras)],
        seed=seed,
        start_time=start_time,
        annotations=notes,
    )


def assert_close(actual, expected, tolerance: float = 1e-9):
    """Assert two arrays (or scalars) agree element-wise within an absolute tolerance."""
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    assert actual.shape == expected.shape, f"shape {actual.shape} != {expected.shape}"
    worst = float(np.max(np.abs(actual - expected))) if actual.size else 0.0
    assert worst <= tolerance, f"max deviation {worst} exceeds {tolerance}"
