"""Closed-loop rollout tests on a single-camera cup task with a tiny untrained policy."""

import numpy as np
import pytest
from pydantic import ValidationError

from bilat.control.controller import BilateralController
from bilat.control.gains import ControllerGains, ObserverConfig
from bilat.policy import ActionChunk, ActionChunkingPolicy
from bilat.runtime import RolloutConfig, home_offsets, run_rollout
from bilat.sim.tasks import CupTask


def _controller(task) -> BilateralController:
    params = task.arm_params()
    return BilateralController(ControllerGains.for_plant(params), ObserverConfig(nominal=params),
                               task.arms_per_side, task.dt)


@pytest.fixture
def policy(tiny_config, encoder):
    return ActionChunkingPolicy(tiny_config, 0, encoder.encoder_id)


def _run(policy, task, encoder, **settings):
    rollout = RolloutConfig(instruction="softly grasp the cup", seed=2, duration=0.05, **settings)
    return run_rollout(policy, task, _controller(task), encoder, rollout)


def test_rollout_config():
    assert RolloutConfig(instruction="x", seed=0).ticks_per_query == 10
    with pytest.raises(ValidationError, match="not a multiple"):
        RolloutConfig(instruction="x", seed=0, policy_rate=300)


def test_home_offsets_spare_the_gripper(cup_task):
    offsets = home_offsets(cup_task, 4, 0.01)
    assert len(offsets) == 1
    assert offsets[0][cup_task.gripper_index] == 0.0
    assert np.all(np.abs(offsets[0]) <= 0.01)
    np.testing.assert_array_equal(offsets[0], home_offsets(cup_task, 4, 0.01)[0])


def test_step_replanning_records_a_full_episode(policy, small_cup_task, encoder, tmp_path):
    rollout = RolloutConfig(instruction="Softly grasp the cup", seed=2, duration=0.05)
    episode, outcome = run_rollout(policy, small_cup_task, _controller(small_cup_task), encoder, rollout,
                                   telemetry_path=tmp_path / "run.telemetry.csv")
    assert episode.sample_count == 50
    assert episode.frame_count == 5
    assert episode.normalized_instruction == "softly grasp the cup"
    notes = episode.annotations
    assert notes["source"] == "rollout"
    assert notes["policy_queries"] == 5
    assert notes["ensemble_gaps"] == 0
    assert notes["stale_chunks"] == 0
    assert notes["encoder_id"] == encoder.encoder_id
    assert notes["rollout"]["replan"] == "step"
    assert outcome.instruction == "Softly grasp the cup"
    lines = (tmp_path / "run.telemetry.csv").read_text().splitlines()
    assert len(lines) == 51


def test_arms_start_at_the_jittered_home(policy, small_cup_task, encoder):
    episode, _ = _run(policy, small_cup_task, encoder, ensembling=False)
    home = np.asarray(small_cup_task.home_pose[0]) + home_offsets(small_cup_task, 2, 0.01)[0]
    np.testing.assert_allclose(episode.follower[0, 0, :, 0], home, atol=1e-6)


def test_chunk_replanning_queries_once_per_chunk(policy, small_cup_task, encoder):
    episode, _ = _run(policy, small_cup_task, encoder, replan="chunk")
    assert episode.annotations["policy_queries"] == 2
    assert episode.annotations["ensemble_gaps"] == 0


def test_rollouts_are_deterministic(policy, small_cup_task, encoder):
    first, _ = _run(policy, small_cup_task, encoder)
    second, _ = _run(policy, small_cup_task, encoder)
    assert first == second


def test_async_rollout_completes(policy, small_cup_task, encoder):
    episode, _ = _run(policy, small_cup_task, encoder, mode="async")
    assert episode.sample_count == 50
    assert episode.annotations["policy_queries"] == 5
    assert episode.annotations["stale_chunks"] <= 5
    assert np.all(np.isfinite(episode.leader))


def test_policy_must_fit_the_task(policy, encoder):
    with pytest.raises(ValueError, match="policy expects"):
        _run(policy, CupTask(), encoder)


def test_duration_must_cover_whole_policy_periods(policy, small_cup_task, encoder):
    with pytest.raises(ValueError, match="policy period"):
        run_rollout(policy, small_cup_task, _controller(small_cup_task), encoder,
                    RolloutConfig(instruction="x", seed=0, duration=0.055))


def _noisy_chunks(chunk_size: int, seed: int):
    """Stand-in for inference: hold the observed pose, with independent noise on every predicted step."""
    rng = np.random.default_rng(seed)

    def predict(policy, follower_obs, images, embedding):
        hold = np.asarray(follower_obs, dtype=np.float64).copy()
        hold[..., 1] = 0.0
        hold[..., 2] = -hold[..., 2]
        values = hold.reshape(1, -1) + rng.normal(0.0, 0.01, size=(chunk_size, hold.size))
        return ActionChunk(values=values, joint_count=hold.shape[1], arms=hold.shape[0])
    return predict


def test_ensembling_smooths_the_commands(policy, small_cup_task, encoder, monkeypatch):
    runs = {}
    for ensembling in (True, False):
        monkeypatch.setattr("bilat.runtime.rollout.infer", _noisy_chunks(policy.config.chunk_size, 7))
        rollout = RolloutConfig(instruction="softly grasp the cup", seed=2, duration=0.2, ensembling=ensembling)
        runs[ensembling], _ = run_rollout(policy, small_cup_task, _controller(small_cup_task), encoder, rollout)
    on, off = runs[True], runs[False]
    assert on.annotations["policy_queries"] == off.annotations["policy_queries"] == 20
    steps = slice(None, None, 10)
    target_change = {key: np.abs(np.diff(run.leader[steps, :, :, 0], axis=0)).mean() for key, run in runs.items()}
    assert target_change[True] < 0.8 * target_change[False]
    assert on.annotations["mean_command_change"] < off.annotations["mean_command_change"]
