"""Tests for PolicyConfig, NormalizationStats and ActionChunk."""

import numpy as np
import pytest
from pydantic import ValidationError

from bilat.policy import ActionChunk, NormalizationStats, PolicyConfig
from bilat.policy.config import MIN_STD


def test_visual_grid_follows_the_image_size():
    config = PolicyConfig(joint_count=5, camera_count=3, language_dim=64)
    assert config.grid == (4, 6)
    assert config.visual_token_count == 72
    assert config.action_dim == config.observation_dim == 15


def test_bimanual_channels():
    assert PolicyConfig(joint_count=7, arms_per_side=2, camera_count=4, language_dim=8).action_dim == 42


def test_heads_must_divide_the_model_dim():
    with pytest.raises(ValidationError, match="head_count"):
        PolicyConfig(joint_count=5, camera_count=1, language_dim=8, model_dim=10, head_count=4)


def test_images_must_be_multiples_of_eight():
    with pytest.raises(ValidationError, match="multiples of 8"):
        PolicyConfig(joint_count=5, camera_count=1, language_dim=8, image_height=30)
    with pytest.raises(ValidationError, match="at least 24"):
        PolicyConfig(joint_count=5, camera_count=1, language_dim=8, image_height=16, image_width=16)


def test_normalization_round_trip(rng):
    actions = rng.normal(3.0, 2.0, (200, 15))
    observations = rng.normal(-1.0, 0.5, (200, 15))
    stats = NormalizationStats.from_arrays(observations, actions)
    normalized = stats.normalize_action(actions)
    np.testing.assert_allclose(normalized.mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(normalized.std(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(stats.denormalize_action(normalized), actions)


def test_constant_channels_get_the_floor_deviation():
    stats = NormalizationStats.from_arrays(np.ones((10, 2)), np.zeros((10, 2)))
    assert stats.observation_std == [MIN_STD, MIN_STD]
    assert stats.normalize_observation([1.0 + MIN_STD, 1.0]).tolist() == pytest.approx([1.0, 0.0])


def test_normalization_must_match_the_channels():
    stats = NormalizationStats.from_arrays(np.zeros((4, 3)), np.zeros((4, 3)))
    with pytest.raises(ValidationError, match="expected 15"):
        PolicyConfig(joint_count=5, camera_count=1, language_dim=8, normalization=stats)


def test_action_chunk_layout():
    chunk = ActionChunk(values=np.arange(45.0).reshape(3, 15), joint_count=5)
    assert chunk.size == 3
    assert chunk.triples().shape == (3, 1, 5, 3)
    assert chunk.triples()[1, 0, 2].tolist() == [21.0, 22.0, 23.0]
    assert chunk.row(2)[0] == 30.0


def test_action_chunk_validation():
    with pytest.raises(ValidationError, match="non-finite"):
        ActionChunk(values=np.full((2, 15), np.nan), joint_count=5)
    with pytest.raises(ValidationError, match="do not match"):
        ActionChunk(values=np.zeros((2, 12)), joint_count=5)
    with pytest.raises(ValidationError, match="non-empty"):
        ActionChunk(values=np.zeros((0, 15)), joint_count=5)
