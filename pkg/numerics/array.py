from typing import Any

import numpy as np

from numerics.errors import DimensionError, NumericError

Array = np.ndarray


def as_array(data: Any, *, copy: bool = False) -> Array:
    if copy:
        return np.array(data, dtype=np.float64, order="C")
    return np.ascontiguousarray(data, dtype=np.float64)


def check_finite(arr: Any, context: str) -> Array:
    values = np.asarray(arr, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))
        index = tuple(int(i) for i in bad[0]) if bad.size else ()
        offending = float(values[index]) if index else float(values)
        raise NumericError("non-finite value", value=offending, context=f"{context} at index {index}")
    return values


def check_matmul_shapes(a_shape: tuple[int, ...], b_shape: tuple[int, ...]) -> tuple[int, ...]:
    if len(a_shape) != 2 or len(b_shape) not in (1, 2):
        raise DimensionError(f"matmul expects a matrix times a matrix or vector, got {a_shape} @ {b_shape}")
    if a_shape[1] != b_shape[0]:
        raise DimensionError(f"inner dimensions differ: {a_shape} @ {b_shape}")
    return (a_shape[0],) if len(b_shape) == 1 else (a_shape[0], b_shape[1])


def matmul(a: Any, b: Any) -> Any:
    from numerics.tape import Var

    if isinstance(a, Var) or isinstance(b, Var):
        return a @ b
    a = as_array(a)
    b = as_array(b)
    check_matmul_shapes(a.shape, b.shape)
    return a @ b


def broadcast_result(a_shape: tuple[int, ...], b_shape: tuple[int, ...]) -> tuple[int, ...]:
    # equal shapes, a scalar against anything, or a row/column vector against a matrix
    if a_shape == b_shape:
        return a_shape
    if int(np.prod(a_shape)) == 1 and len(a_shape) <= len(b_shape):
        return b_shape
    if int(np.prod(b_shape)) == 1 and len(b_shape) <= len(a_shape):
        return a_shape
    try:
        shape = np.broadcast_shapes(a_shape, b_shape)
    except ValueError as exc:
        raise DimensionError(f"cannot combine shapes {a_shape} and {b_shape}") from exc
    if shape not in (a_shape, b_shape) or len(shape) > 2:
        raise DimensionError(f"unsupported broadcast between {a_shape} and {b_shape}")
    return shape


def unbroadcast(grad: Array, shape: tuple[int, ...]) -> Array:
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)
