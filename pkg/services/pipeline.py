"""End-to-end run: reference, PINN, grid, oscillator, rollout, metrics.

Every stage writes its artifact into the run directory; with ``resume`` a
stage whose artifact already exists is loaded instead of recomputed.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from evaluation.metrics import grid_metrics, relative_l2
from middleware.errors import stage_guard
from middleware.timing import StageTimer
from models.run_record import RunRecord
from oscillators.model import OscillatorModel, default_learning_rate, init_oscillator
from oscillators.rollout import rollout
from oscillators.training import train_sequences
from pdes.benchmarks import DomainSpec, PdeSpec, make_benchmark
from pdes.collocation import CollocationCounts, sample_collocation
from pinn.grid import infer_grid
from pinn.mlp import MlpModel, init_mlp
from pinn.trainer import train_pinn
from schemas.config import ExperimentConfig, OscillatorConfig, RolloutStart
from schemas.grid import GridSolution
from schemas.reports import MetricsRecord
from services import persistence
from services.config_loader import dump_config
from solvers.cache import cache_root, cached_reference
from solvers.request import GridRequest

logger = logging.getLogger("piml.pipeline")

CODE_VERSION = "0.1.0"


ARTIFACT_FILES = {
    "config": "config.yaml",
    "pinn": "pinn.npz",
    "pinn_history": "pinn_history.csv",
    "pinn_grid": "pinn_grid.csv",
    "oscillator": "oscillator.npz",
    "oscillator_history": "oscillator_history.csv",
    "rollout": "rollout.csv",
    "reference": "reference.csv",
    "metrics": "metrics.json",
    "record": "record.json",
}


class RunPaths:
    """Artifact paths of one run directory, e.g. ``paths.pinn_grid``."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)

    def __getattr__(self, name: str) -> Path:
        if name in ARTIFACT_FILES:
            return self.root / ARTIFACT_FILES[name]
        raise AttributeError(name)


@dataclass
class RunContext:
    config: ExperimentConfig
    paths: RunPaths
    resume: bool = False
    timer: StageTimer = field(default_factory=StageTimer)
    spec: PdeSpec = field(init=False)
    domain: DomainSpec = field(init=False)

    def __post_init__(self):
        self.spec, self.domain = make_benchmark(self.config.benchmark.name, self.config.benchmark.overrides())

    def reuse(self, path: Path) -> bool:
        return self.resume and path.exists()


def config_digest(config: ExperimentConfig) -> str:
    payload = config.model_dump(mode="json", exclude={"paths", "sweep", "replicates"})
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:10]


def run_id_for(config: ExperimentConfig) -> str:
    return f"{config.benchmark.name}-{config.oscillator.cell.value}-seed{config.seed}-{config_digest(config)}"


def grid_request(config: ExperimentConfig, domain: DomainSpec) -> GridRequest:
    return GridRequest.for_domain(
        domain,
        config.grid.k_t,
        config.grid.k_x,
        modes=config.solver.modes,
        dt_max=config.solver.dt_max,
        dealias=config.solver.dealias,
    )


def resolve_oscillator_config(config: ExperimentConfig, d_in: int) -> OscillatorConfig:
    osc = config.oscillator
    lr = osc.lr or default_learning_rate(osc.cell, config.benchmark.name)
    return osc.model_copy(update={"d_in": d_in, "seed": config.seed, "lr": lr})


def stage_solve_reference(ctx: RunContext) -> GridSolution:
    with stage_guard("solve-reference", benchmark=ctx.spec.name), ctx.timer.stage("solve-reference"):
        if ctx.reuse(ctx.paths.reference):
            return persistence.read_grid_csv(ctx.paths.reference)
        grid = cached_reference(ctx.spec, grid_request(ctx.config, ctx.domain), cache_root(ctx.config.paths.cache))
        persistence.write_grid_csv(grid, ctx.paths.reference)
        return grid


def stage_train_pinn(ctx: RunContext) -> MlpModel:
    with stage_guard("train-pinn", benchmark=ctx.spec.name), ctx.timer.stage("train-pinn"):
        if ctx.reuse(ctx.paths.pinn):
            return persistence.load_mlp(ctx.paths.pinn)
        cfg = ctx.config
        counts = CollocationCounts(
            residual=cfg.pinn.residual_points, boundary=cfg.pinn.boundary_points, ic_fraction=cfg.pinn.ic_fraction
        )
        colloc = sample_collocation(ctx.spec, ctx.domain, counts, cfg.seed)
        model = init_mlp(ctx.spec.n_channels, tuple(cfg.pinn.hidden), seed=cfg.seed)
        model, history = train_pinn(model, ctx.spec, colloc, ctx.domain, cfg.pinn)
        persistence.save_mlp(model, ctx.paths.pinn, cfg.pinn.model_dump(mode="json"))
        persistence.write_pinn_history(history, ctx.paths.pinn_history)
        return model


def stage_infer_grid(ctx: RunContext, model: MlpModel) -> GridSolution:
    with stage_guard("infer-grid", benchmark=ctx.spec.name), ctx.timer.stage("infer-grid"):
        if ctx.reuse(ctx.paths.pinn_grid):
            return persistence.read_grid_csv(ctx.paths.pinn_grid)
        grid = infer_grid(model, ctx.domain, ctx.config.grid.k_t, ctx.config.grid.k_x, "train")
        persistence.write_grid_csv(grid, ctx.paths.pinn_grid)
        return grid


def stage_train_oscillator(ctx: RunContext, grids: list[GridSolution]) -> OscillatorModel:
    with stage_guard("train-oscillator", cell=ctx.config.oscillator.cell.value), ctx.timer.stage("train-oscillator"):
        if ctx.reuse(ctx.paths.oscillator):
            return persistence.load_oscillator(ctx.paths.oscillator)
        model = init_oscillator(resolve_oscillator_config(ctx.config, grids[0].d_in))
        model, history = train_sequences(model, grids)
        persistence.save_oscillator(model, ctx.paths.oscillator)
        persistence.write_oscillator_history(history, ctx.paths.oscillator_history)
        return model


def stage_rollout(ctx: RunContext, model: OscillatorModel, seed: GridSolution, pinn: Optional[MlpModel] = None) -> GridSolution:
    with stage_guard("rollout", cell=model.kind.value), ctx.timer.stage("rollout"):
        cfg = ctx.config
        first_input = None
        if cfg.rollout.first_input is RolloutStart.PINN_FIRST_TEST_LEVEL:
            if pinn is None:
                pinn = persistence.load_mlp(ctx.paths.pinn)
            first_input = infer_grid(pinn, ctx.domain, cfg.grid.k_t, cfg.grid.k_x, "test").values[0]
        grid = rollout(model, seed, cfg.grid.horizon, warm_start=cfg.rollout.warm_start, first_input=first_input)
        persistence.write_grid_csv(grid, ctx.paths.rollout)
        return grid


def stage_evaluate(ctx: RunContext, prediction: GridSolution, reference: GridSolution, pinn_grid: GridSolution) -> dict[str, Any]:
    with stage_guard("evaluate", benchmark=ctx.spec.name), ctx.timer.stage("evaluate"):
        k_t = ctx.config.grid.k_t
        test_ref = reference.rows(k_t, k_t + prediction.k_t)
        train_ref = reference.rows(0, k_t)
        stacked, magnitude = grid_metrics(prediction, test_ref)
        record = MetricsRecord(
            benchmark=ctx.spec.name, cell=ctx.config.oscillator.cell.value, seed=ctx.config.seed, stacked=stacked, magnitude=magnitude
        )
        result: dict[str, Any] = {"test": record.model_dump(), "pinn_relative_l2": relative_l2(pinn_grid, train_ref)}
        if ctx.config.metrics.include_training_window:
            train_stacked, train_magnitude = grid_metrics(pinn_grid, train_ref)
            result["train"] = record.model_copy(update={"window": "train", "stacked": train_stacked, "magnitude": train_magnitude}).model_dump()
        ctx.paths.metrics.write_text(json.dumps(result, indent=2))
        return result


def build_record(ctx: RunContext, metrics: dict[str, Any], sweep_id: Optional[str] = None, sweep_point: Optional[dict] = None) -> RunRecord:
    artifacts = {
        name: str(getattr(ctx.paths, name))
        for name in ("config", "reference", "pinn", "pinn_history", "pinn_grid", "oscillator", "oscillator_history", "rollout", "metrics")
        if getattr(ctx.paths, name).exists()
    }
    test = metrics["test"]
    record = RunRecord(
        run_id=ctx.paths.root.name,
        sweep_id=sweep_id,
        benchmark=ctx.spec.name,
        cell=ctx.config.oscillator.cell.value,
        seed=ctx.config.seed,
        run_dir=str(ctx.paths.root),
        code_version=CODE_VERSION,
        config_json=ctx.config.model_dump_json(),
        sweep_point_json=json.dumps(sweep_point or {}),
        artifacts_json=json.dumps(artifacts),
        stage_seconds_json=json.dumps(ctx.timer.durations),
        magnitude_json=json.dumps(test["magnitude"]) if test["magnitude"] else None,
        training_window_json=json.dumps(metrics["train"]) if "train" in metrics else None,
        pinn_relative_l2=metrics["pinn_relative_l2"],
        **test["stacked"],
    )
    ctx.paths.record.write_text(record.model_dump_json(indent=2))
    return record


def run_experiment(
    config: ExperimentConfig,
    *,
    resume: bool = False,
    sweep_id: Optional[str] = None,
    sweep_point: Optional[dict] = None,
) -> RunRecord:
    """All stages in order; artifacts of a failed run stay in place for ``resume``."""
    ctx = RunContext(config=config, paths=RunPaths(Path(config.paths.out) / run_id_for(config)), resume=resume)
    ctx.paths.config.write_text(dump_config(config))
    logger.info("run start", extra={"run_id": ctx.paths.root.name, "resume": resume})

    reference = stage_solve_reference(ctx)
    pinn = stage_train_pinn(ctx)
    pinn_grid = stage_infer_grid(ctx, pinn)
    oscillator = stage_train_oscillator(ctx, [pinn_grid])
    prediction = stage_rollout(ctx, oscillator, pinn_grid, pinn)
    metrics = stage_evaluate(ctx, prediction, reference, pinn_grid)
    record = build_record(ctx, metrics, sweep_id, sweep_point)
    logger.info("run done", extra={"run_id": record.run_id, "relative_l2": record.relative_l2})
    return record
