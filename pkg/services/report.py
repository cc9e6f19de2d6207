"""Metric tables and figures from finished runs."""

import json
import logging
from pathlib import Path
from typing import Sequence

import matplotlib
import numpy as np
import pandas as pd

from models.run_record import RunRecord
from numerics.errors import ArgumentError
from schemas.config import ExperimentConfig
from schemas.grid import GridSolution
from services.persistence import FLOAT_FORMAT, read_grid_csv, write_grid_csv

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger("piml.report")

METRIC_COLUMNS = ("relative_l2", "explained_variance", "max_error", "mean_absolute_error", "rmse")

SNAPSHOT_TIMES = {
    "burgers": (0.83, 0.98),
    "burgers_parametric": (0.83, 0.98),
    "euler_bernoulli": (0.83, 0.98),
    "allen_cahn": (0.81, 0.99),
    "schrodinger": (1.28, 1.5),
}

plt.rcParams["figure.figsize"] = (6.0, 3.5)
plt.rcParams["font.size"] = 9
plt.rcParams["savefig.bbox"] = "tight"


def records_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    rows = []
    for record in records:
        row = {"run_id": record.run_id, "benchmark": record.benchmark, "cell": record.cell, "seed": record.seed}
        row.update(record.metrics())
        row["pinn_relative_l2"] = record.pinn_relative_l2
        if record.magnitude_json:
            row.update({f"magnitude_{k}": v for k, v in json.loads(record.magnitude_json).items()})
        row.update({f"point_{k}": v for k, v in record.sweep_point().items() if not isinstance(v, list)})
        rows.append(row)
    return pd.DataFrame(rows)


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """Mean and std over seeds for every (benchmark, cell, sweep point)."""
    keys = ["benchmark", "cell"] + [column for column in frame.columns if column.startswith("point_")]
    values = [column for column in frame.columns if column in METRIC_COLUMNS or column.startswith("magnitude_") or column == "pinn_relative_l2"]
    grouped = frame.groupby(keys, sort=False, dropna=False)[values].agg(["mean", "std"])
    grouped.columns = [f"{metric}_{stat}" for metric, stat in grouped.columns]
    counts = frame.groupby(keys, sort=False, dropna=False).size().rename("replicates")
    return grouped.join(counts).reset_index()


def _load(record: RunRecord, name: str) -> GridSolution:
    path = record.artifacts().get(name)
    if path is None or not Path(path).exists():
        raise FileNotFoundError(f"run {record.run_id}: {name} grid missing")
    return read_grid_csv(Path(path))


def _prediction(pinn_grid: GridSolution, rollout: GridSolution) -> GridSolution:
    """PINN levels on the training window followed by the rollout."""
    return pinn_grid.model_copy(update={"values": np.vstack([pinn_grid.values, rollout.values])})


def _display(grid: GridSolution) -> GridSolution:
    return grid.magnitude() if grid.n_channels == 2 else grid


def plot_heatmap(reference: GridSolution, prediction: GridSolution, t_train_end: float, title: str, path: Path) -> Path:
    ref, pred = _display(reference), _display(prediction)
    error = np.abs(pred.values - ref.values)
    fig, axes = plt.subplots(1, 3, figsize=(11.0, 3.2), sharey=True)
    for ax, data, label in zip(axes, (ref.values, pred.values, error), ("reference", "prediction", "|error|")):
        mesh = ax.pcolormesh(ref.times, ref.xs, data.T, shading="auto", cmap="viridis" if label != "|error|" else "magma", rasterized=True)
        ax.axvline(t_train_end, color="white", linestyle="--", linewidth=1.0)
        ax.set_title(label)
        ax.set_xlabel("t")
        fig.colorbar(mesh, ax=ax)
    axes[0].set_ylabel("x")
    fig.suptitle(title)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def plot_snapshots(reference: GridSolution, prediction: GridSolution, times: Sequence[float], title: str, path: Path) -> Path:
    ref, pred = _display(reference), _display(prediction)
    fig, axes = plt.subplots(1, len(times), squeeze=False)
    for ax, t in zip(axes[0], times):
        level = ref.level_index(t)
        ax.plot(ref.xs, ref.values[level], color="black", linewidth=1.5, label="reference")
        ax.plot(pred.xs, pred.values[level], color="tab:red", linestyle="--", linewidth=1.2, label="prediction")
        ax.set_title(f"t = {ref.times[level]:.2f}")
        ax.set_xlabel("x")
    axes[0][0].set_ylabel("|u|" if reference.n_channels == 2 else "u")
    axes[0][0].legend(frameon=False)
    fig.suptitle(title)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def write_report(records: Sequence[RunRecord], out_dir: Path) -> list[Path]:
    """Metric CSVs for all records, heatmap data and SVG figures per record."""
    if not records:
        raise ArgumentError("no run records to report")
    out_dir.mkdir(parents=True, exist_ok=True)
    frame = records_frame(records)
    written = [out_dir / "metrics.csv", out_dir / "summary.csv"]
    frame.to_csv(written[0], index=False, float_format=FLOAT_FORMAT)
    summarize(frame).to_csv(written[1], index=False, float_format=FLOAT_FORMAT)

    for record in records:
        config = ExperimentConfig.model_validate_json(record.config_json)
        pinn_grid = _load(record, "pinn_grid")
        prediction = _prediction(pinn_grid, _load(record, "rollout"))
        reference = _load(record, "reference").rows(0, prediction.k_t)
        t_train_end = float(pinn_grid.times[-1])
        title = f"{record.benchmark} / {record.cell} / seed {record.seed}"
        stem = out_dir / record.run_id
        written.append(write_grid_csv(prediction, stem.with_name(f"{record.run_id}-heatmap.csv")))
        written.append(plot_heatmap(reference, prediction, t_train_end, title, stem.with_name(f"{record.run_id}-heatmap.svg")))
        times = SNAPSHOT_TIMES.get(config.benchmark.name, (t_train_end,))
        written.append(plot_snapshots(reference, prediction, times, title, stem.with_name(f"{record.run_id}-snapshots.svg")))
        logger.info("report written", extra={"run_id": record.run_id})
    return written
