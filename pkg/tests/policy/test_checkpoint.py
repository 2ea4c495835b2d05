"""Tests for the BLATM1 checkpoint format in bilat.policy.checkpoint."""

import json
import struct

import numpy as np
import pytest

from bilat.policy import (ActionChunkingPolicy, CheckpointFormatError, NormalizationStats, decode_checkpoint,
                          encode_checkpoint, load_checkpoint, save_checkpoint)
from bilat.policy.checkpoint import MAGIC


def _policy(config) -> ActionChunkingPolicy:
    stats = NormalizationStats.from_arrays(np.arange(30.0).reshape(2, 15), np.ones((2, 15)))
    return ActionChunkingPolicy(config.model_copy(update={"normalization": stats}), 4, "hashed-8-0")


def test_round_trip(tiny_config, tmp_path):
    policy = _policy(tiny_config)
    path = save_checkpoint(policy, tmp_path / "models" / "policy.blatm", run_config={"seed": 3})
    restored, header = load_checkpoint(path)
    assert restored.config == policy.config
    assert restored.encoder_id == "hashed-8-0"
    assert header["run_config"] == {"seed": 3}
    original = policy.state()
    for name, value in restored.state().items():
        np.testing.assert_array_equal(value, original[name])
        assert value.dtype == np.float64


def test_float32_tensors_stay_float32(tiny_config):
    policy = ActionChunkingPolicy(tiny_config.model_copy(update={"dtype": "float32"}), 0)
    restored, _ = decode_checkpoint(encode_checkpoint(policy))
    assert all(value.dtype == np.float32 for value in restored.state().values())


def test_not_a_checkpoint():
    with pytest.raises(CheckpointFormatError, match="not a BLATM1"):
        decode_checkpoint(b"BLAT1\0" + bytes(20))


def test_truncated_payload(tiny_config):
    data = encode_checkpoint(_policy(tiny_config))
    with pytest.raises(CheckpointFormatError, match="payload holds"):
        decode_checkpoint(data[:-8])


def test_header_past_the_end():
    with pytest.raises(CheckpointFormatError, match="runs past the end"):
        decode_checkpoint(MAGIC + struct.pack("<I", 1000) + b"{}")


def test_unreadable_header():
    body = json.dumps({"policy": {"joint_count": 0}}).encode()
    with pytest.raises(CheckpointFormatError, match="unreadable header"):
        decode_checkpoint(MAGIC + struct.pack("<I", len(body)) + body)
