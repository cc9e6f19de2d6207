from typing import Any, Mapping, Optional

import numpy as np

from numerics import tape as ad
from numerics.array import check_finite
from numerics.errors import ArgumentError
from oscillators.model import DRIVES, HiddenState, OscillatorModel
from schemas.config import CellKind, DampingMode, OscillatorConfig

Drives = Mapping[str, Any]


def input_drives(model: OscillatorModel, u: Any, params: Optional[Mapping[str, Any]] = None) -> dict[str, Any]:
    params = model.params if params is None else params
    return {matrix: params[matrix] @ u + params[bias] for matrix, bias in DRIVES[model.kind]}


def sequence_drives(model: OscillatorModel, inputs: np.ndarray, params: Mapping[str, Any]) -> dict[str, Any]:
    """Drives for every row of ``inputs`` (steps x d_in); row n belongs to step n."""
    return {matrix: inputs @ params[matrix].T + params[bias] for matrix, bias in DRIVES[model.kind]}


def _cornn(cfg: OscillatorConfig, p: Mapping[str, Any], state: HiddenState, d: Drives) -> HiddenState:
    y, z = state.y, state.z
    dt = cfg.delta_t
    force = ad.tanh(p["W"] @ y + p["W_z"] @ z + d["V"])
    if cfg.damping is DampingMode.IMPLICIT:
        z = (z + dt * force - (dt * cfg.gamma) * y) / (1.0 + dt * cfg.epsilon)
    else:
        z = z + dt * (force - cfg.gamma * y - cfg.epsilon * z)
    return HiddenState(y + dt * z, z)


def _lem_gates(cfg: OscillatorConfig, p: Mapping[str, Any], y: Any, d: Drives) -> tuple[Any, Any]:
    return cfg.delta_t * ad.sigmoid(p["W1"] @ y + d["V1"]), cfg.delta_t * ad.sigmoid(p["W2"] @ y + d["V2"])


def _lem(cfg: OscillatorConfig, p: Mapping[str, Any], state: HiddenState, d: Drives) -> HiddenState:
    y, z = state.y, state.z
    gate_z, gate_y = _lem_gates(cfg, p, y, d)
    z = (1.0 - gate_z) * z + gate_z * ad.tanh(p["Wz"] @ y + d["Vz"])
    # y sees the freshly updated z
    y = (1.0 - gate_y) * y + gate_y * ad.tanh(p["Wy"] @ z + d["Vy"])
    return HiddenState(y, z)


def _rnn(cfg: OscillatorConfig, p: Mapping[str, Any], state: HiddenState, d: Drives) -> HiddenState:
    return HiddenState(ad.tanh(p["W"] @ state.y + d["V"]), state.z)


def _lstm(cfg: OscillatorConfig, p: Mapping[str, Any], state: HiddenState, d: Drives) -> HiddenState:
    h, c = state.y, state.z
    i = ad.sigmoid(p["W_i"] @ h + d["V_i"])
    f = ad.sigmoid(p["W_f"] @ h + d["V_f"])
    g = ad.tanh(p["W_g"] @ h + d["V_g"])
    o = ad.sigmoid(p["W_o"] @ h + d["V_o"])
    c = f * c + i * g
    return HiddenState(o * ad.tanh(c), c)


def _gru(cfg: OscillatorConfig, p: Mapping[str, Any], state: HiddenState, d: Drives) -> HiddenState:
    h = state.y
    r = ad.sigmoid(p["W_r"] @ h + d["V_r"])
    update = ad.sigmoid(p["W_u"] @ h + d["V_u"])
    candidate = ad.tanh(p["W_n"] @ (r * h) + d["V_n"])
    return HiddenState((1.0 - update) * h + update * candidate, state.z)


_STEPS = {
    CellKind.CORNN: _cornn,
    CellKind.LEM: _lem,
    CellKind.RNN: _rnn,
    CellKind.LSTM: _lstm,
    CellKind.GRU: _gru,
}


def step_with_drives(model: OscillatorModel, state: HiddenState, drives: Drives, params: Optional[Mapping[str, Any]] = None) -> HiddenState:
    params = model.params if params is None else params
    new = _STEPS[model.kind](model.config, params, state, drives)
    if not isinstance(new.y, ad.Var):
        check_finite(new.y, context=f"{model.kind.value} state y")
        check_finite(new.z, context=f"{model.kind.value} state z")
    return new


def step(model: OscillatorModel, state: HiddenState, u: Any, params: Optional[Mapping[str, Any]] = None) -> HiddenState:
    return step_with_drives(model, state, input_drives(model, u, params), params)


def _require(model: OscillatorModel, *kinds: CellKind) -> None:
    if model.kind not in kinds:
        raise ArgumentError(f"{model.kind.value} model passed to a {'/'.join(k.value for k in kinds)} step")


def cornn_step(model: OscillatorModel, state: HiddenState, u: Any, params: Optional[Mapping[str, Any]] = None) -> HiddenState:
    _require(model, CellKind.CORNN)
    return step(model, state, u, params)


def lem_step(model: OscillatorModel, state: HiddenState, u: Any, params: Optional[Mapping[str, Any]] = None) -> HiddenState:
    _require(model, CellKind.LEM)
    return step(model, state, u, params)


def lem_gates(model: OscillatorModel, state: HiddenState, u: Any, params: Optional[Mapping[str, Any]] = None) -> tuple[Any, Any]:
    """Effective step sizes ``(dt_z, dt_y)`` of one LEM update, each in ``(0, delta_t)``."""
    _require(model, CellKind.LEM)
    params = model.params if params is None else params
    return _lem_gates(model.config, params, state.y, input_drives(model, u, params))


def baseline_step(model: OscillatorModel, state: HiddenState, u: Any, params: Optional[Mapping[str, Any]] = None) -> HiddenState:
    _require(model, CellKind.RNN, CellKind.LSTM, CellKind.GRU)
    return step(model, state, u, params)


def readout(model: OscillatorModel, state: HiddenState, params: Optional[Mapping[str, Any]] = None) -> Any:
    params = model.params if params is None else params
    return params["Q"] @ state.y
