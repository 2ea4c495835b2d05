"""The BLATM1 checkpoint format.

Layout: the magic bytes, a little-endian u32 header length, a UTF-8 JSON header
(policy config with normalization statistics, encoder_id, the run config and an
index of tensors), then every tensor as little-endian bytes at its indexed offset.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from .config import PolicyConfig
from .errors import CheckpointFormatError, ShapeMismatchError
from .model import ActionChunkingPolicy


logger = logging.getLogger(__name__)

MAGIC = b"BLATM1"
_LENGTH = struct.Struct("<I")
_HEADER_OFFSET = len(MAGIC) + _LENGTH.size
_DTYPES = {"float32": "<f4", "float64": "<f8"}


def encode_checkpoint(policy: ActionChunkingPolicy, run_config: dict[str, Any] | None = None) -> bytes:
    index, blocks, offset = [], [], 0
    for name, parameter in policy.named_parameters().items():
        dtype = parameter.dtype.name
        block = np.ascontiguousarray(parameter.data, dtype=_DTYPES[dtype]).tobytes()
        index.append({"name": name, "dtype": dtype, "shape": list(parameter.shape), "offset": offset})
        blocks.append(block)
        offset += len(block)
    header = {
        "policy": policy.config.model_dump(mode="json"),
        "encoder_id": policy.encoder_id,
        "run_config": run_config,
        "tensors": index,
    }
    encoded = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return b"".join([MAGIC, _LENGTH.pack(len(encoded)), encoded, *blocks])


def decode_checkpoint(data: bytes, path="<memory>") -> tuple[ActionChunkingPolicy, dict[str, Any]]:
    """Rebuild the policy; returns it with the decoded header."""
    if data[:len(MAGIC)] != MAGIC:
        raise CheckpointFormatError(f"{path}: not a BLATM1 checkpoint (starts with {bytes(data[:len(MAGIC)])!r})")
    if len(data) < _HEADER_OFFSET:
        raise CheckpointFormatError(f"{path}: file ends inside the header length field")
    (length,) = _LENGTH.unpack_from(data, len(MAGIC))
    end = _HEADER_OFFSET + length
    if end > len(data):
        raise CheckpointFormatError(f"{path}: header length {length} runs past the end of the file")
    try:
        header = json.loads(data[_HEADER_OFFSET:end].decode("utf-8"))
        config = PolicyConfig.model_validate(header["policy"])
        index = header["tensors"]
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValidationError) as error:
        raise CheckpointFormatError(f"{path}: unreadable header at offset {_HEADER_OFFSET} ({error})") from error

    payload = memoryview(data)[end:]
    tensors: dict[str, np.ndarray] = {}
    for entry in index:
        if entry.get("dtype") not in _DTYPES:
            raise CheckpointFormatError(f"{path}: tensor {entry.get('name')!r} has unknown dtype {entry.get('dtype')!r}")
        dtype = np.dtype(_DTYPES[entry["dtype"]])
        count = int(np.prod(entry["shape"]))
        stop = entry["offset"] + count * dtype.itemsize
        if stop > len(payload):
            raise CheckpointFormatError(f"{path}: tensor {entry['name']!r} needs bytes up to {stop}, "
                                        f"payload holds {len(payload)}")
        tensors[entry["name"]] = np.frombuffer(payload, dtype=dtype, count=count,
                                               offset=entry["offset"]).reshape(entry["shape"])
    policy = ActionChunkingPolicy(config, 0, header.get("encoder_id", ""))
    try:
        policy.load_state(tensors)
    except ShapeMismatchError as error:
        raise CheckpointFormatError(f"{path}: {error}") from error
    return policy, header


def save_checkpoint(policy: ActionChunkingPolicy, path: str | Path, run_config: dict[str, Any] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(policy, run_config))
    logger.info("checkpoint written", extra={"fields": {"path": str(path), "encoder_id": policy.encoder_id}})
    return path


def load_checkpoint(path: str | Path) -> tuple[ActionChunkingPolicy, dict[str, Any]]:
    path = Path(path)
    return decode_checkpoint(path.read_bytes(), path)
