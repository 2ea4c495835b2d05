"""Pytest fixtures shared by the bilat test suite."""

import logging

import numpy as np
import pytest

from bilat.config import RunConfig
from bilat.lang import HashedEncoder
from bilat.policy.config import PolicyConfig
from bilat.sim.tasks import CupTask, SpongeTask


TINY_POLICY = {
    "encoder_layers": 1,
    "decoder_layers": 1,
    "model_dim": 16,
    "head_count": 2,
    "feedforward_dim": 32,
    "chunk_size": 3,
    "latent_dim": 4,
    "backbone_channels": [4, 4, 4, 4],
    "dtype": "float64",
}


@pytest.fixture(autouse=True)
def _reset_bilat_logging():
    """Drop handlers installed by `configure_logging` so tests never write to a closed stream."""
    yield
    logger = logging.getLogger("bilat")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def cup_task():
    return CupTask()


@pytest.fixture
def sponge_task():
    return SpongeTask()


@pytest.fixture
def small_cup_task():
    """Cup task seen by a single 32x32 camera, cheap enough for closed-loop policy tests."""
    return CupTask(camera_count=1, image_width=32, image_height=32)


@pytest.fixture
def encoder():
    return HashedEncoder(dimension=8)


@pytest.fixture
def tiny_config():
    """A policy small enough to train or gradient-check in a few seconds (5 joints, 1 camera, 32x32)."""
    return PolicyConfig(joint_count=5, camera_count=1, image_height=32, image_width=32, language_dim=8,
                        **TINY_POLICY)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def run_config(tmp_path):
    """Cup configuration with a tiny policy and every artifact under `tmp_path`."""
    return RunConfig.model_validate({
        "task": "cup",
        "seed": 0,
        "episodes_per_instruction": 1,
        "encoder": {"kind": "hashed", "dimension": 8},
        "policy": TINY_POLICY,
        "training": {"epochs": 1, "batch_size": 4},
        "rollout": {"trials": 1, "duration": 0.05},
        "paths": {
            "demos": str(tmp_path / "demos"),
            "augmented": str(tmp_path / "aug"),
            "checkpoint": str(tmp_path / "model.blatm"),
            "training_log": str(tmp_path / "training_log.csv"),
            "rollouts": str(tmp_path / "rollouts"),
            "report": str(tmp_path / "report.json"),
            "plotdata": str(tmp_path / "plotdata"),
        },
    })
