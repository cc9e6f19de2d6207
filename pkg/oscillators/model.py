from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from numerics.errors import DimensionError
from optim.params import Params
from schemas.config import CellKind, OscillatorConfig

# (input matrix, bias) pairs; the drive ``V @ u + b`` of each gate can be
# projected for a whole sequence at once
DRIVES: dict[CellKind, tuple[tuple[str, str], ...]] = {
    CellKind.CORNN: (("V", "b"),),
    CellKind.LEM: (("V1", "b1"), ("V2", "b2"), ("Vz", "bz"), ("Vy", "by")),
    CellKind.RNN: (("V", "b"),),
    CellKind.LSTM: (("V_i", "b_i"), ("V_f", "b_f"), ("V_g", "b_g"), ("V_o", "b_o")),
    CellKind.GRU: (("V_r", "b_r"), ("V_u", "b_u"), ("V_n", "b_n")),
}

RECURRENT: dict[CellKind, tuple[str, ...]] = {
    CellKind.CORNN: ("W", "W_z"),
    CellKind.LEM: ("W1", "W2", "Wz", "Wy"),
    CellKind.RNN: ("W",),
    CellKind.LSTM: ("W_i", "W_f", "W_g", "W_o"),
    CellKind.GRU: ("W_r", "W_u", "W_n"),
}

_LEARNING_RATES = {
    CellKind.LEM: 1e-3,
    CellKind.CORNN: 1e-3,
    CellKind.GRU: 1e-2,
    CellKind.LSTM: 1e-2,
    CellKind.RNN: 1e-2,
}


def default_learning_rate(cell: CellKind, benchmark: Optional[str] = None) -> float:
    if cell is CellKind.LEM and benchmark == "schrodinger":
        return 1e-2
    return _LEARNING_RATES[cell]


def parameter_shapes(config: OscillatorConfig) -> dict[str, tuple[int, ...]]:
    m, d = config.hidden, config.d_in
    shapes: dict[str, tuple[int, ...]] = {name: (m, m) for name in RECURRENT[config.cell]}
    for matrix, bias in DRIVES[config.cell]:
        shapes[matrix] = (m, d)
        shapes[bias] = (m,)
    shapes["Q"] = (d, m)
    return shapes


@dataclass(frozen=True)
class HiddenState:
    """``y`` is the observed state; ``z`` the second oscillator state or the LSTM cell."""

    y: Any
    z: Any

    @classmethod
    def zeros(cls, hidden: int) -> "HiddenState":
        return cls(np.zeros(hidden), np.zeros(hidden))


@dataclass(frozen=True)
class OscillatorModel:
    config: OscillatorConfig
    params: Params

    def __post_init__(self):
        expected = parameter_shapes(self.config)
        if set(expected) != set(self.params):
            raise DimensionError(f"{self.config.cell.value} expects parameters {sorted(expected)}, got {sorted(self.params)}")
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                raise DimensionError(f"parameter {name} has shape {self.params[name].shape}, expected {shape}")

    @property
    def kind(self) -> CellKind:
        return self.config.cell

    def with_params(self, params: Params) -> "OscillatorModel":
        return OscillatorModel(config=self.config, params=params)


def init_oscillator(config: OscillatorConfig) -> OscillatorModel:
    """Every weight uniform in [-1/sqrt(m), 1/sqrt(m)], drawn in a fixed name order."""
    rng = np.random.default_rng(config.seed)
    bound = 1.0 / np.sqrt(config.hidden)
    params = {name: rng.uniform(-bound, bound, size=shape) for name, shape in parameter_shapes(config).items()}
    return OscillatorModel(config=config, params=params)
