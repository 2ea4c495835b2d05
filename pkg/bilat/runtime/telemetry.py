"""Per-tick rollout telemetry and its CSV form."""

import csv
from pathlib import Path

import numpy as np

from ..control.controller import ControlTelemetry


FIELDS = ("target_angle", "target_velocity", "target_torque", "reference", "command", "reaction", "saturated")


class TelemetryRecorder:
    """Collects one row per control tick: the leader target, then controller signals per joint."""

    def __init__(self, arms: int, joints: int):
        self.arms = arms
        self.joints = joints
        self.rows: list[np.ndarray] = []

    @property
    def columns(self) -> list[str]:
        return ["tick"] + [f"arm{arm}.joint{joint}.{field}"
                           for arm in range(self.arms) for joint in range(self.joints) for field in FIELDS]

    def record(self, tick: int, target: np.ndarray, telemetry: ControlTelemetry) -> None:
        target = np.asarray(target, dtype=np.float64).reshape(self.arms, self.joints, 3)
        per_joint = np.concatenate([
            target,
            telemetry.follower_reference[..., None],
            telemetry.follower_command[..., None],
            telemetry.follower_reaction[..., None],
            telemetry.saturated[..., None].astype(np.float64),
        ], axis=-1)
        self.rows.append(np.concatenate([[float(tick)], per_joint.reshape(-1)]))

    def table(self) -> np.ndarray:
        return np.stack(self.rows) if self.rows else np.zeros((0, len(self.columns)))

    def mean_command_change(self) -> float:
        """Mean absolute tick-to-tick change of the torque commands."""
        table = self.table()
        if len(table) < 2:
            return 0.0
        command = FIELDS.index("command")
        columns = [1 + i * len(FIELDS) + command for i in range(self.arms * self.joints)]
        return float(np.abs(np.diff(table[:, columns], axis=0)).mean())

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        saturated = FIELDS.index("saturated")
        with path.open("w", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(self.columns)
            for row in self.table():
                cells = [str(int(row[0]))]
                for index, value in enumerate(row[1:]):
                    cells.append(str(int(value)) if index % len(FIELDS) == saturated else repr(float(value)))
                writer.writerow(cells)
        return path
