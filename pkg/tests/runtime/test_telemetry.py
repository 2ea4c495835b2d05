"""Tests for bilat.runtime.telemetry.TelemetryRecorder."""

import csv

import numpy as np
import pytest

from bilat.control.controller import ControlTelemetry
from bilat.runtime import TelemetryRecorder


def _telemetry(tick: int, command: list[float], saturated: list[bool]) -> ControlTelemetry:
    return ControlTelemetry(
        tick=tick,
        follower_reference=np.array([[0.5, -0.5]]),
        follower_command=np.array([command]),
        follower_reaction=np.array([[0.01, 0.02]]),
        saturated=np.array([saturated]),
    )


def test_columns_name_every_joint_signal():
    columns = TelemetryRecorder(2, 3).columns
    assert columns[0] == "tick"
    assert len(columns) == 1 + 2 * 3 * 7
    assert columns[1:4] == ["arm0.joint0.target_angle", "arm0.joint0.target_velocity", "arm0.joint0.target_torque"]
    assert columns[-1] == "arm1.joint2.saturated"


def test_rows_and_command_change():
    recorder = TelemetryRecorder(1, 2)
    target = np.arange(6.0)
    recorder.record(0, target, _telemetry(0, [0.1, 0.2], [False, False]))
    recorder.record(1, target, _telemetry(1, [0.3, -0.2], [False, True]))
    table = recorder.table()
    assert table.shape == (2, 15)
    assert table[1, :8].tolist() == [1.0, 0.0, 1.0, 2.0, 0.5, 0.3, 0.01, 0.0]
    assert recorder.mean_command_change() == pytest.approx(0.3)


def test_empty_recorder():
    recorder = TelemetryRecorder(1, 1)
    assert recorder.table().shape == (0, 8)
    assert recorder.mean_command_change() == 0.0


def test_csv_writes_flags_as_integers(tmp_path):
    recorder = TelemetryRecorder(1, 2)
    recorder.record(0, np.zeros(6), _telemetry(0, [0.1, 0.2], [False, True]))
    path = recorder.write_csv(tmp_path / "out" / "run.telemetry.csv")
    with path.open(newline="") as file:
        header, row = list(csv.reader(file))
    assert header == recorder.columns
    assert row[0] == "0"
    assert row[header.index("arm0.joint0.saturated")] == "0"
    assert row[header.index("arm0.joint1.saturated")] == "1"
    assert float(row[header.index("arm0.joint1.command")]) == 0.2
