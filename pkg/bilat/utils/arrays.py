"""Small numpy helpers used at module boundaries."""

import numpy as np


def as_vector(name: str, value, length: int | None = None) -> np.ndarray:
    """Return `value` as a 1-D float64 array, checking its length when given."""
    array = np.asarray(value, dtype=np.float64).reshape(-1)
    if length is not None and array.shape[0] != length:
        raise ValueError(f"`{name}` has {array.shape[0]} entries, expected {length}")
    return array


def first_non_finite(**arrays) -> str | None:
    """Return the name of the first argument holding a NaN or infinity, or None."""
    for name, value in arrays.items():
        if not np.all(np.isfinite(value)):
            return name
    return None
