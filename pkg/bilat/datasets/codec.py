"""The BLAT1 episode file format.

Layout: the magic bytes, a little-endian u32 header length, a UTF-8 JSON header,
then the leader stream and the follower stream as little-endian float32, then
one RGB8 frame block per camera. Round trips are bit-exact.
"""

import json
import logging
import struct
from pathlib import Path

import numpy as np

from ..utils.serialize import serialize
from .episode import Episode
from .errors import BadMagicError, HeaderError, PayloadLengthError


logger = logging.getLogger(__name__)

MAGIC = b"BLAT1\0"
_LENGTH = struct.Struct("<I")
_HEADER_OFFSET = len(MAGIC) + _LENGTH.size
_REQUIRED = ("task", "instruction", "normalized_instruction", "control_rate", "image_rate",
             "joint_count", "arm_count", "samples", "frames", "cameras", "seed")


def _header(episode: Episode) -> dict:
    return {
        "task": episode.task,
        "instruction": episode.instruction,
        "normalized_instruction": episode.normalized_instruction,
        "control_rate": episode.control_rate,
        "image_rate": episode.image_rate,
        "joint_count": episode.joint_count,
        "arm_count": episode.arm_count,
        "samples": episode.sample_count,
        "frames": episode.frame_count,
        "cameras": [{"width": frames.shape[2], "height": frames.shape[1]} for frames in episode.frames],
        "seed": episode.seed,
        "start_time": episode.start_time,
        "annotations": serialize(episode.annotations),
    }


def encode_episode(episode: Episode) -> bytes:
    header = json.dumps(_header(episode), sort_keys=True, separators=(",", ":")).encode("utf-8")
    parts = [MAGIC, _LENGTH.pack(len(header)), header,
             episode.leader.astype("<f4").tobytes(), episode.follower.astype("<f4").tobytes()]
    parts.extend(np.ascontiguousarray(frames).tobytes() for frames in episode.frames)
    return b"".join(parts)


def decode_episode(data: bytes, path="<memory>") -> Episode:
    if len(data) < len(MAGIC) or data[:len(MAGIC)] != MAGIC:
        raise BadMagicError(path, bytes(data[:len(MAGIC)]))
    if len(data) < _HEADER_OFFSET:
        raise HeaderError(path, len(MAGIC), "file ends inside the header length field")
    (length,) = _LENGTH.unpack_from(data, len(MAGIC))
    end = _HEADER_OFFSET + length
    if end > len(data):
        raise HeaderError(path, len(MAGIC), f"header length {length} runs past the end of the file "
                                            f"({len(data) - _HEADER_OFFSET} bytes remain)")
    try:
        header = json.loads(data[_HEADER_OFFSET:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as error:
        raise HeaderError(path, _HEADER_OFFSET, f"header of declared length {length} is not valid JSON ({error})") from error
    if not isinstance(header, dict):
        raise HeaderError(path, _HEADER_OFFSET, "header is not a JSON object")
    missing = [key for key in _REQUIRED if key not in header]
    if missing:
        raise HeaderError(path, _HEADER_OFFSET, f"header lacks {', '.join(missing)}")

    samples, joints = header["samples"], header["joint_count"]
    arms = header["arm_count"] // 2
    stream_shape = (samples, arms, joints, 3)
    stream_bytes = 4 * samples * arms * joints * 3
    frame_shapes = [(header["frames"], camera["height"], camera["width"], 3) for camera in header["cameras"]]
    expected = 2 * stream_bytes + sum(int(np.prod(shape)) for shape in frame_shapes)
    actual = len(data) - end
    if actual != expected:
        raise PayloadLengthError(path, expected, actual)

    offset = end

    def take(count: int, dtype: str, shape) -> np.ndarray:
        nonlocal offset
        array = np.frombuffer(data, dtype=dtype, count=count, offset=offset).reshape(shape)
        offset += array.nbytes
        return array

    leader = take(samples * arms * joints * 3, "<f4", stream_shape).astype(np.float32)
    follower = take(samples * arms * joints * 3, "<f4", stream_shape).astype(np.float32)
    frames = [take(int(np.prod(shape)), "u1", shape).copy() for shape in frame_shapes]
    return Episode(
        task=header["task"],
        instruction=header["instruction"],
        normalized_instruction=header["normalized_instruction"],
        control_rate=header["control_rate"],
        image_rate=header["image_rate"],
        joint_count=joints,
        arm_count=header["arm_count"],
        leader=leader,
        follower=follower,
        frames=frames,
        seed=header["seed"],
        start_time=header.get("start_time", 0.0),
        annotations=header.get("annotations", {}),
    )


def write_episode(episode: Episode, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_episode(episode))
    logger.debug("episode written", extra={"fields": {"path": str(path), "samples": episode.sample_count}})
    return path


def read_episode(path: str | Path) -> Episode:
    path = Path(path)
    return decode_episode(path.read_bytes(), path)
