import numpy as np

from numerics.jet import Jet


def channels(fn):
    """Wrap a scalar field ``(X, T) -> Jet`` so its output rows are channels."""

    def evaluate(x, t):
        return Jet.stack([fn(x, t)])

    return evaluate


def central_difference(fn, vector: np.ndarray, index: int, h: float = 1e-5) -> float:
    plus, minus = vector.copy(), vector.copy()
    plus[index] += h
    minus[index] -= h
    return (fn(plus) - fn(minus)) / (2.0 * h)
