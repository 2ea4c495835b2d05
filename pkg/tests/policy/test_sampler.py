"""Tests for training batches and episodic sampling in bilat.policy.data."""

import numpy as np
import pytest
from pydantic import ValidationError

from bilat.policy import EpisodeSampler, ShapeMismatchError, TrainingBatch, compute_normalization
from tests.helpers import make_episode


def _episodes(count: int = 1, samples: int = 5):
    return [make_episode(samples, control_rate=100, height=32, width=32, seed=seed) for seed in range(count)]


def test_normalization_pools_every_episode():
    episodes = _episodes(2)
    stats = compute_normalization(episodes)
    followers = np.concatenate([e.follower.reshape(5, -1) for e in episodes]).astype(np.float64)
    np.testing.assert_allclose(stats.observation_mean, followers.mean(axis=0))
    with pytest.raises(ValueError, match="at least one"):
        compute_normalization([])


def test_targets_are_padded_past_the_end(tiny_config):
    episodes = _episodes()
    stats = compute_normalization(episodes)
    sampler = EpisodeSampler(episodes, [np.ones(8)], tiny_config, stats)
    batch = sampler.batch([(0, 4)])
    assert batch.is_pad.tolist() == [[False, True, True]]
    np.testing.assert_allclose(batch.actions[0, 0], stats.normalize_action(episodes[0].leader[4].reshape(-1)))
    assert not batch.actions[0, 1:].any()
    np.testing.assert_allclose(batch.observations[0],
                               stats.normalize_observation(episodes[0].follower[4].reshape(-1)))
    np.testing.assert_array_equal(batch.frames[0, 0], episodes[0].frames[0][4])
    assert batch.language.tolist() == [[1.0] * 8]


def test_full_chunks_are_not_padded(tiny_config):
    episodes = _episodes()
    sampler = EpisodeSampler(episodes, [np.ones(8)], tiny_config, compute_normalization(episodes))
    batch = sampler.batch([(0, 0), (0, 2)])
    assert batch.size == 2
    assert not batch.is_pad.any()


def test_epochs_draw_every_episode(tiny_config, rng):
    episodes = _episodes(3)
    sampler = EpisodeSampler(episodes, [np.ones(8)] * 3, tiny_config, compute_normalization(episodes),
                             samples_per_episode=2)
    items = sampler.epoch(rng)
    assert sorted(index for index, _ in items) == [0, 0, 1, 1, 2, 2]
    assert all(0 <= start < 5 for _, start in items)
    assert [batch.size for batch in sampler.batches(rng, 4)] == [4, 2]


def test_sampler_checks_its_inputs(tiny_config):
    episodes = _episodes()
    stats = compute_normalization(episodes)
    with pytest.raises(ValueError, match="embeddings"):
        EpisodeSampler(episodes, [], tiny_config, stats)
    with pytest.raises(ShapeMismatchError, match="language embedding"):
        EpisodeSampler(episodes, [np.ones(4)], tiny_config, stats)
    two_cameras = [make_episode(5, control_rate=100, height=32, width=32, cameras=2)]
    with pytest.raises(ShapeMismatchError, match="episode cameras"):
        EpisodeSampler(two_cameras, [np.ones(8)], tiny_config, stats)
    small = [make_episode(5, control_rate=100)]
    with pytest.raises(ShapeMismatchError, match="episode frames"):
        EpisodeSampler(small, [np.ones(8)], tiny_config, stats)


def test_batch_fields_must_agree():
    with pytest.raises(ValidationError, match="language"):
        TrainingBatch(observations=np.zeros((2, 15)), frames=np.zeros((2, 1, 32, 32, 3), dtype=np.uint8),
                      language=np.zeros((3, 8)), actions=np.zeros((2, 3, 15)), is_pad=np.zeros((2, 3), dtype=bool))
