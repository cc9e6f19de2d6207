"""Files a run leaves behind: grid CSVs, loss histories and model checkpoints."""

import json
import logging
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
import pandas as pd

from numerics.errors import ArgumentError
from optim.params import Params
from oscillators.model import OscillatorModel
from pinn.mlp import MlpModel
from schemas.config import OscillatorConfig
from schemas.grid import GridSolution
from schemas.reports import PinnLossReport

logger = logging.getLogger("piml.persistence")

CHECKPOINT_FORMAT = 1
FLOAT_FORMAT = "%.17g"
_META_KEY = "__meta__"


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".json")


def write_grid_csv(grid: GridSolution, path: Path) -> Path:
    """Long format ``t,x,channel,value`` plus a JSON sidecar with the level layout."""
    path.parent.mkdir(parents=True, exist_ok=True)
    k_t, k_x, n_ch = grid.k_t, grid.k_x, grid.n_channels
    frame = pd.DataFrame(
        {
            "t": np.repeat(grid.times, n_ch * k_x),
            "x": np.tile(grid.xs, k_t * n_ch),
            "channel": np.tile(np.repeat(np.arange(n_ch), k_x), k_t),
            "value": grid.values.ravel(),
        }
    )
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    meta = {"time_step": grid.time_step, "first_level": grid.first_level, "n_channels": n_ch, "k_x": k_x, "k_t": k_t}
    _sidecar(path).write_text(json.dumps(meta, indent=2))
    return path


def read_grid_csv(path: Path) -> GridSolution:
    if not path.exists() or not _sidecar(path).exists():
        raise FileNotFoundError(f"grid file or its sidecar missing: {path}")
    meta = json.loads(_sidecar(path).read_text())
    frame = pd.read_csv(path, float_precision="round_trip", dtype={"t": "float64", "x": "float64", "channel": "int64", "value": "float64"})
    k_x, n_ch, k_t = meta["k_x"], meta["n_channels"], meta["k_t"]
    if len(frame) != k_t * n_ch * k_x:
        raise ArgumentError(f"{path} holds {len(frame)} rows, expected {k_t * n_ch * k_x}")
    return GridSolution(
        time_step=meta["time_step"],
        first_level=meta["first_level"],
        n_channels=n_ch,
        xs=frame["x"].to_numpy()[:k_x].copy(),
        values=frame["value"].to_numpy().reshape(k_t, n_ch * k_x).copy(),
    )


def write_pinn_history(history: Sequence[PinnLossReport], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        [{"epoch": r.epoch, "total": r.total, "residual": r.residual_term, "ic": r.ic_term, "bc": r.bc_term} for r in history],
        columns=["epoch", "total", "residual", "ic", "bc"],
    )
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_oscillator_history(history: Sequence[float], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame({"epoch": np.arange(len(history)), "loss": np.asarray(history, dtype=np.float64)}).to_csv(
        path, index=False, float_format=FLOAT_FORMAT
    )
    return path


def save_checkpoint(path: Path, kind: str, architecture: Mapping[str, Any], seed: int, hyperparameters: Mapping[str, Any], params: Params) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if _META_KEY in params:
        raise ArgumentError(f"parameter name {_META_KEY} is reserved")
    meta = {
        "format_version": CHECKPOINT_FORMAT,
        "kind": kind,
        "architecture": dict(architecture),
        "seed": seed,
        "hyperparameters": dict(hyperparameters),
        "shapes": {name: list(value.shape) for name, value in params.items()},
    }
    arrays = {name: np.asarray(value, dtype="<f8") for name, value in params.items()}
    with path.open("wb") as handle:
        np.savez(handle, **{_META_KEY: np.array(json.dumps(meta))}, **arrays)
    logger.debug("checkpoint written", extra={"path": str(path), "kind": kind})
    return path


def load_checkpoint(path: Path) -> tuple[dict[str, Any], Params]:
    with np.load(path, allow_pickle=False) as archive:
        meta = json.loads(str(archive[_META_KEY]))
        if meta.get("format_version") != CHECKPOINT_FORMAT:
            raise ArgumentError(f"{path}: unsupported checkpoint format {meta.get('format_version')!r}")
        params = {name: archive[name].astype(np.float64) for name in meta["shapes"]}
    for name, shape in meta["shapes"].items():
        if list(params[name].shape) != shape:
            raise ArgumentError(f"{path}: parameter {name} has shape {params[name].shape}, expected {shape}")
    return meta, params


def save_mlp(model: MlpModel, path: Path, hyperparameters: Mapping[str, Any] | None = None) -> Path:
    architecture = {"widths": list(model.widths), "activation": model.activation}
    return save_checkpoint(path, "mlp", architecture, model.seed, hyperparameters or {}, model.params)


def load_mlp(path: Path) -> MlpModel:
    meta, params = load_checkpoint(path)
    if meta["kind"] != "mlp":
        raise ArgumentError(f"{path} holds a {meta['kind']} checkpoint, not an mlp")
    arch = meta["architecture"]
    return MlpModel(widths=arch["widths"], params=params, activation=arch["activation"], seed=meta["seed"])


def save_oscillator(model: OscillatorModel, path: Path) -> Path:
    config = model.config.model_dump(mode="json")
    architecture = {"cell": config["cell"], "d_in": config["d_in"], "hidden": config["hidden"]}
    return save_checkpoint(path, "oscillator", architecture, model.config.seed, config, model.params)


def load_oscillator(path: Path) -> OscillatorModel:
    meta, params = load_checkpoint(path)
    if meta["kind"] != "oscillator":
        raise ArgumentError(f"{path} holds a {meta['kind']} checkpoint, not an oscillator")
    return OscillatorModel(config=OscillatorConfig.model_validate(meta["hyperparameters"]), params=params)
