"""Tests for the evaluation report and plotting CSVs."""

import csv

import pytest

from bilat.evaluation.bands import cup_force_bands
from bilat.evaluation.force import RATING_RULE, force_accuracy
from bilat.evaluation.histograms import histogram_of
from bilat.evaluation.outcomes import detect_outcome
from bilat.evaluation.plotdata import series_columns, series_table, write_histogram_csv
from bilat.evaluation.report import build_report, read_report, summarize, write_report
from tests.helpers import make_episode, scene_event


SOFT = "softly grasp the cup"
STRONG = "strongly grasp the cup"
FULL = [scene_event(0.01, "grasp"), scene_event(0.02, "apex"), scene_event(0.05, "stack"),
        scene_event(0.06, "reopen")]
DROPPED = [scene_event(0.01, "grasp"), scene_event(0.02, "apex"), scene_event(0.05, "drop")]


def _outcomes():
    bands = cup_force_bands()
    episodes = {
        "soft-0": make_episode(100, events=FULL, gripper_torque=0.04),
        "soft-1": make_episode(100, events=DROPPED, gripper_torque=0.04, seed=1),
        "strong-0": make_episode(100, instruction=STRONG, events=FULL, gripper_torque=0.2, seed=2),
    }
    return episodes, [detect_outcome(episode, bands=bands) for episode in episodes.values()]


def test_summary_rows():
    _, outcomes = _outcomes()
    rows = summarize(outcomes)
    assert [row.instruction for row in rows] == [SOFT, STRONG]
    soft = rows[0]
    assert soft.trials == 2
    assert soft.success_rate == "1/2"
    assert soft.stages == {"pick": "2/2", "move": "2/2", "place": "1/2"}
    assert soft.crushed == 0
    assert soft.force_accuracy == pytest.approx(1.0)


def test_report_needs_outcomes():
    with pytest.raises(ValueError, match="at least one outcome"):
        build_report([], {})


def test_summary_lookup():
    _, outcomes = _outcomes()
    report = build_report(outcomes, {})
    assert report.task == "cup"
    assert report.rating_rule == RATING_RULE
    assert report.summary(STRONG).successes == 1
    with pytest.raises(KeyError):
        report.summary("gently grasp the cup")


def test_write_and_read_back(tmp_path):
    episodes, outcomes = _outcomes()
    force = force_accuracy({SOFT: [episodes["soft-0"], episodes["soft-1"]], STRONG: [episodes["strong-0"]]},
                           cup_force_bands(), label="hashed-8-0")
    histograms = {"soft": histogram_of([0.04] * 10, "follower.gripper.torque", 4, (0.0, 0.08))}
    path = write_report(outcomes, histograms, tmp_path / "out" / "report.json", force=[force],
                        episodes={"soft-0": episodes["soft-0"]}, run_config={"seed": 0})

    expected = build_report(outcomes, histograms, [force], {"seed": 0})
    assert read_report(path).model_dump() == expected.model_dump()
    assert read_report(path).force_accuracy[0].rating == "○"

    series = (tmp_path / "out" / "report.soft-0.csv").read_text().splitlines()
    assert len(series) == 101
    assert len(series[0].split(",")) == 31
    assert (tmp_path / "out" / "report.histograms.csv").exists()


def test_series_layout():
    episode = make_episode(20, arms=2, joints=3)
    columns = series_columns(episode)
    assert columns[0] == "time"
    assert columns[1] == "leader.arm0.joint0.angle"
    assert columns[-1] == "follower.arm1.joint2.torque"
    table = series_table(episode)
    assert table.shape == (20, len(columns))
    assert table[3, 0] == pytest.approx(0.003)
    assert table[0, columns.index("follower.arm1.joint2.torque")] == pytest.approx(float(episode.follower[0, 1, 2, 2]))


def test_histogram_csv(tmp_path):
    histograms = {"strong": histogram_of([0.1, 0.3], "follower.gripper.torque", 2, (0.0, 0.4))}
    with write_histogram_csv(histograms, tmp_path / "h.csv").open(newline="") as file:
        rows = list(csv.reader(file))
    assert rows[0] == ["name", "channel", "bin_lo", "bin_hi", "count", "mass"]
    assert rows[1] == ["strong", "follower.gripper.torque", "0.0", "0.2", "1", "0.5"]
    assert len(rows) == 3
