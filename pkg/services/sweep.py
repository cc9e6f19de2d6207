"""Studies over one configuration axis, each point run for every replicate seed."""

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

import pandas as pd

from models.run_record import RunRecord
from numerics.errors import ArgumentError
from schemas.config import CellKind, ExperimentConfig
from services.pipeline import (
    RunContext,
    RunPaths,
    build_record,
    run_experiment,
    stage_evaluate,
    stage_infer_grid,
    stage_rollout,
    stage_solve_reference,
    stage_train_oscillator,
    stage_train_pinn,
)
from services.report import METRIC_COLUMNS, records_frame, summarize

logger = logging.getLogger("piml.sweep")

SWEEP_AXES = ("cells", "delta_t", "cornn_lattice", "nu", "pinn_epochs")


def _update(config: ExperimentConfig, section: str, **values: Any) -> ExperimentConfig:
    part = getattr(config, section).model_copy(update=values)
    return config.model_copy(update={section: part}, deep=True)


def _with_pinn_epochs(config: ExperimentConfig, epochs: int) -> ExperimentConfig:
    # the budget goes to the last phase; earlier phases keep theirs
    phases = [phase.model_copy() for phase in config.pinn.phases]
    phases[-1] = phases[-1].model_copy(update={"epochs": epochs})
    return _update(config, "pinn", phases=phases)


def sweep_points(config: ExperimentConfig, axis: str) -> list[tuple[dict[str, Any], ExperimentConfig]]:
    sweep = config.sweep
    if axis == "cells":
        # each cell trains with its own default rate unless one was configured
        return [({"cell": cell.value}, _update(config, "oscillator", cell=cell)) for cell in sweep.cells]
    if axis == "delta_t":
        return [({"delta_t": dt}, _update(config, "oscillator", delta_t=dt)) for dt in sweep.delta_t]
    if axis == "cornn_lattice":
        return [
            ({"epsilon": eps, "gamma": gamma}, _update(config, "oscillator", cell=CellKind.CORNN, epsilon=eps, gamma=gamma))
            for eps, gamma in sweep.cornn_lattice
        ]
    if axis == "pinn_epochs":
        return [({"pinn_epochs": n}, _with_pinn_epochs(config, n)) for n in sweep.pinn_epochs]
    raise ArgumentError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def sweep_id_for(config: ExperimentConfig, axis: str) -> str:
    payload = json.dumps(config.model_dump(mode="json", exclude={"paths"}), sort_keys=True)
    return f"{config.benchmark.name}-{axis}-{hashlib.sha256(payload.encode()).hexdigest()[:8]}"


def _run_point(job: tuple[ExperimentConfig, bool, str, dict[str, Any]]) -> dict[str, Any]:
    config, resume, sweep_id, point = job
    return run_experiment(config, resume=resume, sweep_id=sweep_id, sweep_point=point).model_dump()


def worker_count(config: ExperimentConfig) -> int:
    env = os.getenv("PIML_WORKERS", "").strip()
    return int(env) if env else config.sweep.workers


def run_parametric(config: ExperimentConfig, sweep_id: str, *, resume: bool = False) -> list[RunRecord]:
    """One PINN per viscosity, one oscillator over all training sequences, rollouts at held-out viscosities.

    The held-out seed sequence comes from a PINN trained at that viscosity on
    the training window only.
    """
    sweep = config.sweep
    if not sweep.nu_train or not sweep.nu_test:
        raise ArgumentError("parametric study needs training and held-out viscosities")
    root = Path(config.paths.out) / sweep_id / f"seed{config.seed}"
    base = _update(config, "benchmark", name="burgers_parametric")

    grids = []
    for nu in sweep.nu_train:
        ctx = RunContext(_update(base, "benchmark", nu=nu), RunPaths(root / f"train-nu{nu:g}"), resume=resume)
        grids.append(stage_infer_grid(ctx, stage_train_pinn(ctx)))
    oscillator = stage_train_oscillator(RunContext(base, RunPaths(root / "oscillator"), resume=resume), grids)

    records = []
    for nu in sweep.nu_test:
        ctx = RunContext(_update(base, "benchmark", nu=nu), RunPaths(root / f"test-nu{nu:g}-seed{config.seed}"), resume=resume)
        reference = stage_solve_reference(ctx)
        pinn = stage_train_pinn(ctx)
        pinn_grid = stage_infer_grid(ctx, pinn)
        prediction = stage_rollout(ctx, oscillator, pinn_grid, pinn)
        metrics = stage_evaluate(ctx, prediction, reference, pinn_grid)
        records.append(build_record(ctx, metrics, sweep_id, {"nu": nu, "nu_train": list(sweep.nu_train)}))
    return records


def run_sweep(config: ExperimentConfig, axis: str, *, resume: bool = False, workers: Optional[int] = None) -> tuple[str, list[RunRecord], pd.DataFrame]:
    """Every point x replicate; returns the sweep id, its records and the mean/std table."""
    if axis not in SWEEP_AXES:
        raise ArgumentError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    sweep_id = sweep_id_for(config, axis)
    workers = workers or worker_count(config)
    logger.info("sweep start", extra={"sweep_id": sweep_id, "axis": axis, "replicates": config.replicates, "workers": workers})

    if axis == "nu":
        records = [record for r in range(config.replicates) for record in run_parametric(config.for_replicate(r), sweep_id, resume=resume)]
    else:
        points = sweep_points(config, axis)
        if not points:
            raise ArgumentError(f"sweep axis {axis!r} has no values")
        jobs = [(cfg.for_replicate(r), resume, sweep_id, point) for point, cfg in points for r in range(config.replicates)]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                dumps = list(pool.map(_run_point, jobs))
        else:
            dumps = [_run_point(job) for job in jobs]
        records = [RunRecord.model_validate(dump) for dump in dumps]

    table = summarize(records_frame(records))
    out = Path(config.paths.out) / sweep_id
    out.mkdir(parents=True, exist_ok=True)
    records_frame(records).to_csv(out / "records.csv", index=False, float_format="%.17g")
    table.to_csv(out / "summary.csv", index=False, float_format="%.17g")
    logger.info("sweep done", extra={"sweep_id": sweep_id, "runs": len(records), "metrics": list(METRIC_COLUMNS)})
    return sweep_id, records, table
