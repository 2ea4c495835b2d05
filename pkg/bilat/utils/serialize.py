"""Recursive conversion of nested structures to JSON-serializable values."""

from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel


def serialize(data: Any) -> dict | list | int | float | str | bool | None:
    """
    Convert any list or dict of scalars, numpy values or pydantic.BaseModel instances
    (even nested) to a JSON serializable format using only dict, list, int, float, str,
    and bool.
    """
    if isinstance(data, BaseModel):
        return serialize(data.model_dump(mode="json"))
    if isinstance(data, dict):
        return {str(key): serialize(value) for key, value in data.items()}
    if isinstance(data, np.ndarray):
        return serialize(data.tolist())
    if isinstance(data, (list, tuple, set)):
        return [serialize(item) for item in data]
    if isinstance(data, Enum):
        return data.value
    if isinstance(data, np.bool_):
        return bool(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, np.floating):
        return float(data)
    if isinstance(data, (int, float, str, bool)) or data is None:
        return data
    if isinstance(data, Path):
        return str(data)
    raise ValueError(f"Cannot serialize `{data}` of type {type(data)}")
