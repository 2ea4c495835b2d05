"""Tests for stage detection and hold windows in bilat.evaluation.outcomes."""

import pytest

from bilat.evaluation.bands import InstructionBand, cup_force_bands, sponge_force_bands
from bilat.evaluation.errors import MissingSceneLogError
from bilat.evaluation.outcomes import detect_outcome, hold_window
from tests.helpers import make_episode, scene_event


CUP_SUCCESS = [
    scene_event(0.02, "grasp"),
    scene_event(0.04, "apex"),
    scene_event(0.06, "stack"),
    scene_event(0.07, "reopen"),
]


def test_successful_cup_episode():
    episode = make_episode(100, events=CUP_SUCCESS, gripper_torque=0.05)
    outcome = detect_outcome(episode, bands=cup_force_bands())
    assert outcome.stages == {"pick": True, "move": True, "place": True}
    assert outcome.success is True
    assert outcome.hold_window == (0.02, 0.06)
    assert outcome.force_accuracy == 1.0
    assert len(outcome.joint_stats) == 5
    assert outcome.joint_stats[4].torque_mean == pytest.approx(0.05)


def test_dropped_cup_fails_the_place_stage():
    events = [scene_event(0.02, "grasp"), scene_event(0.03, "apex"), scene_event(0.05, "drop")]
    outcome = detect_outcome(make_episode(100, events=events, gripper_torque=0.2), bands=cup_force_bands())
    assert outcome.stages == {"pick": True, "move": True, "place": False}
    assert outcome.success is False
    assert outcome.hold_window == (0.02, 0.05)
    assert outcome.force_accuracy == 0.0


def test_crushed_grasp_scores_zero():
    events = [scene_event(0.02, "grasp"), scene_event(0.03, "crush")]
    outcome = detect_outcome(make_episode(100, events=events, gripper_torque=0.05), bands=cup_force_bands())
    assert outcome.crushed is True
    assert outcome.force_accuracy == 0.0


def test_no_grasp_means_no_window():
    outcome = detect_outcome(make_episode(100), bands=cup_force_bands())
    assert outcome.stages["pick"] is False
    assert outcome.hold_window is None
    assert outcome.force_accuracy is None
    assert outcome.joint_stats == []


def test_scene_log_is_required():
    episode = make_episode(100, with_scene_log=False)
    with pytest.raises(MissingSceneLogError, match="scene log"):
        detect_outcome(episode)
    assert detect_outcome(episode, scene_log=CUP_SUCCESS).success is True


def test_band_window_end_caps_the_cup_window():
    band = InstructionBand(instruction="softly grasp the cup", angle=(2.4, 2.6), torque=(0.0, 0.08), window_end=0.04)
    assert hold_window(make_episode(100, events=CUP_SUCCESS), band) == (0.02, 0.04)


def _sponge(events, torque=0.05, arms=2):
    return make_episode(610, task="sponge", instruction="softly twist the sponge", control_rate=100, arms=arms,
                        joints=7, events=events, gripper_torque=torque)


def test_sponge_window_opens_at_six_seconds():
    events = [scene_event(2.0, "grab", "sponge"), scene_event(3.5, "lift", "sponge"), scene_event(5.5, "twist", "sponge")]
    outcome = detect_outcome(_sponge(events), bands=sponge_force_bands())
    assert outcome.success is True
    assert outcome.hold_window == (6.0, pytest.approx(6.1))
    assert outcome.force_accuracy == 1.0
    assert len(outcome.joint_stats) == 14


def test_sponge_slip_fails_the_twist():
    events = [scene_event(2.0, "grab", "sponge"), scene_event(3.5, "lift", "sponge"),
              scene_event(4.0, "slip", "sponge"), scene_event(5.5, "twist", "sponge")]
    outcome = detect_outcome(_sponge(events))
    assert outcome.slipped is True
    assert outcome.stages == {"grab": True, "lift": True, "twist": False}
    assert outcome.force_accuracy is None


def test_sponge_needs_two_arms():
    with pytest.raises(ValueError, match="bimanual"):
        detect_outcome(_sponge([], arms=1))


def test_unknown_task():
    with pytest.raises(ValueError, match="Unsupported task"):
        detect_outcome(make_episode(10, control_rate=100, task="laundry"))
