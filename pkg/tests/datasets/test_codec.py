"""Tests for the BLAT1 episode codec in bilat.datasets.codec."""

import json
import struct

import numpy as np
import pytest

from bilat.datasets.codec import MAGIC, decode_episode, encode_episode, read_episode, write_episode
from bilat.datasets.errors import BadMagicError, HeaderError, PayloadLengthError
from tests.helpers import make_episode, scene_event


def test_round_trip_is_bit_exact(tmp_path):
    episode = make_episode(60, cameras=2, events=[scene_event(0.02, "grasp")],
                           annotations={"crushed": False, "torque_target": 0.03})
    path = write_episode(episode, tmp_path / "sub" / "episode.blat")
    decoded = read_episode(path)
    assert decoded == episode
    assert decoded.leader.dtype == np.float32
    assert decoded.annotations["scene_log"][0]["kind"] == "grasp"


def test_numpy_annotations_become_plain_json():
    episode = make_episode(10, control_rate=100, annotations={"peak": np.float64(0.25), "flag": np.bool_(True),
                                                              "values": np.arange(3)})
    decoded = decode_episode(encode_episode(episode))
    assert decoded.annotations["peak"] == 0.25
    assert decoded.annotations["flag"] is True
    assert decoded.annotations["values"] == [0, 1, 2]


def test_frame_payload_size():
    episode = make_episode(10, control_rate=100, cameras=3, height=48, width=64, with_scene_log=False)
    data = encode_episode(episode)
    (length,) = struct.unpack_from("<I", data, len(MAGIC))
    payload = len(data) - len(MAGIC) - 4 - length
    assert payload == 2 * 4 * 10 * 5 * 3 + 3 * 10 * 9216


def test_bad_magic():
    data = encode_episode(make_episode(10, control_rate=100))
    with pytest.raises(BadMagicError):
        decode_episode(b"XXXXXX" + data[6:])
    with pytest.raises(BadMagicError):
        decode_episode(b"BL")


def test_truncated_payload_reports_lengths():
    data = encode_episode(make_episode(10, control_rate=100))
    with pytest.raises(PayloadLengthError) as info:
        decode_episode(data[:-7], "episode.blat")
    assert info.value.actual == info.value.expected - 7
    assert "episode.blat" in str(info.value)


def test_header_length_past_the_end():
    data = bytearray(encode_episode(make_episode(10, control_rate=100)))
    struct.pack_into("<I", data, len(MAGIC), 10 ** 9)
    with pytest.raises(HeaderError, match="runs past the end") as info:
        decode_episode(bytes(data))
    assert info.value.offset == len(MAGIC)


def test_header_that_is_not_json():
    body = b"{not json"
    data = MAGIC + struct.pack("<I", len(body)) + body
    with pytest.raises(HeaderError, match="not valid JSON") as info:
        decode_episode(data)
    assert info.value.offset == len(MAGIC) + 4


def test_header_missing_keys():
    body = json.dumps({"task": "cup"}).encode()
    with pytest.raises(HeaderError, match="lacks"):
        decode_episode(MAGIC + struct.pack("<I", len(body)) + body)
