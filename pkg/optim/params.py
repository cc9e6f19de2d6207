"""Named parameter dictionaries and their flat-vector view."""

import numpy as np

Params = dict[str, np.ndarray]


def copy_params(params: Params) -> Params:
    return {name: np.array(value, dtype=np.float64, copy=True) for name, value in params.items()}


def flatten(params: Params) -> np.ndarray:
    if not params:
        return np.zeros(0)
    return np.concatenate([np.ravel(value) for value in params.values()])


def unflatten(vector: np.ndarray, like: Params) -> Params:
    out: Params = {}
    offset = 0
    for name, value in like.items():
        size = value.size
        out[name] = vector[offset : offset + size].reshape(value.shape).copy()
        offset += size
    return out


def parameter_count(params: Params) -> int:
    return sum(value.size for value in params.values())
