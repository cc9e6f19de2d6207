from dataclasses import dataclass, field

import numpy as np

from numerics.array import check_finite
from numerics.errors import DimensionError
from optim.params import Params


@dataclass
class AdamState:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: Params = field(default_factory=dict)
    v: Params = field(default_factory=dict)

    @classmethod
    def create(cls, params: Params, lr: float = 1e-3, **kwargs) -> "AdamState":
        return cls(
            lr=lr,
            m={name: np.zeros_like(value) for name, value in params.items()},
            v={name: np.zeros_like(value) for name, value in params.items()},
            **kwargs,
        )


def adam_step(state: AdamState, params: Params, grads: Params) -> Params:
    """Bias-corrected Adam update; returns new arrays and advances ``state``."""
    for name, g in grads.items():
        check_finite(g, context=f"adam gradient {name}")
        if name not in params or g.shape != params[name].shape or g.shape != state.m[name].shape:
            raise DimensionError(f"gradient {name!r} does not match its parameter")

    state.step += 1
    correction1 = 1.0 - state.beta1**state.step
    correction2 = 1.0 - state.beta2**state.step
    updated: Params = {}
    for name, value in params.items():
        g = grads[name]
        state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * g
        state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * g * g
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        updated[name] = value - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return updated
