from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from numerics.errors import ArgumentError, DimensionError
from numerics.functional import ACTIVATIONS
from numerics.jet import Jet
from optim.params import Params, parameter_count

DEFAULT_HIDDEN = (20, 20, 20, 20)


@dataclass
class MlpModel:
    widths: list[int]
    params: Params = field(default_factory=dict)
    activation: str = "tanh"
    seed: int = 0

    def __post_init__(self):
        if len(self.widths) < 2 or self.widths[0] != 2:
            raise DimensionError(f"an MLP maps (x, t) to channels; got widths {self.widths}")
        if self.activation not in ACTIVATIONS:
            raise ArgumentError(f"unknown activation {self.activation!r}")
        expected = sum(w_in * w_out + w_out for w_in, w_out in zip(self.widths[:-1], self.widths[1:]))
        if self.params and parameter_count(self.params) != expected:
            raise DimensionError(f"parameter count {parameter_count(self.params)} does not match {expected}")

    @property
    def n_layers(self) -> int:
        return len(self.widths) - 1

    @property
    def n_channels(self) -> int:
        return self.widths[-1]

    def with_params(self, params: Params) -> "MlpModel":
        return MlpModel(widths=list(self.widths), params=params, activation=self.activation, seed=self.seed)


def init_mlp(n_channels: int, hidden: tuple[int, ...] = DEFAULT_HIDDEN, seed: int = 0) -> MlpModel:
    """Glorot-uniform weights, zero biases."""
    widths = [2, *hidden, n_channels]
    rng = np.random.default_rng(seed)
    params: Params = {}
    for layer, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        params[f"W{layer}"] = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        params[f"b{layer}"] = np.zeros((fan_out, 1))
    return MlpModel(widths=widths, params=params, seed=seed)


def _inputs(x: Any, t: Any) -> Any:
    if isinstance(x, Jet) or isinstance(t, Jet):
        if not isinstance(x, Jet):
            x = Jet.constant(np.asarray(x, dtype=np.float64), t.order)
        if not isinstance(t, Jet):
            t = Jet.constant(np.asarray(t, dtype=np.float64), x.order)
        x, t = _match_shapes(x, t)
        return Jet.stack([x, t])
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    x, t = np.broadcast_arrays(x, t)
    return np.vstack([x, t])


def _match_shapes(x: Jet, t: Jet) -> tuple[Jet, Jet]:
    shape = np.broadcast_shapes(x.shape, t.shape)
    widen = lambda jet: Jet({k: np.broadcast_to(v, shape).copy() for k, v in jet.coeffs.items()}, jet.order)
    return (x if x.shape == shape else widen(x)), (t if t.shape == shape else widen(t))


def mlp_forward(model: MlpModel, x: Any, t: Any, params: Optional[dict[str, Any]] = None) -> Any:
    """Evaluate the network at points (x, t); output rows are channels.

    ``x`` and ``t`` may be arrays or jets; ``params`` may hold tape ``Var``s.
    """
    params = model.params if params is None else params
    activate = ACTIVATIONS[model.activation]
    h = _inputs(x, t)
    for layer in range(model.n_layers):
        h = params[f"W{layer}"] @ h + params[f"b{layer}"]
        if layer < model.n_layers - 1:
            h = activate(h)
    return h


def mlp_field(model: MlpModel, params: Optional[dict[str, Any]] = None):
    """The network as a field evaluator ``(X, T) -> Jet`` for derivative passes."""

    def evaluate(x: Jet, t: Jet) -> Any:
        return mlp_forward(model, x, t, params)

    return evaluate
