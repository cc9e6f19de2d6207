"""Single stages, reading earlier artifacts from the run directory."""

from rich.console import Console

from commands.common import CacheOption, ConfigOption, OutOption, SeedOption, resolve_config, run_context
from services import persistence
from services.ledger import ledger, record_runs
from services.pipeline import (
    build_record,
    stage_evaluate,
    stage_infer_grid,
    stage_rollout,
    stage_solve_reference,
    stage_train_oscillator,
    stage_train_pinn,
)

console = Console()


def solve_reference(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None, cache: CacheOption = None):
    """Solve (or fetch from cache) the reference grid."""
    ctx = run_context(resolve_config(config, seed, out, cache))
    grid = stage_solve_reference(ctx)
    console.print(f"reference {grid.k_t}x{grid.d_in} -> {ctx.paths.reference}")


def train_pinn(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None):
    """Train the PINN and write its training-window grid."""
    ctx = run_context(resolve_config(config, seed, out, None))
    grid = stage_infer_grid(ctx, stage_train_pinn(ctx))
    console.print(f"pinn grid {grid.k_t}x{grid.d_in} -> {ctx.paths.pinn_grid}")


def train_oscillator(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None):
    """Train the oscillator on the PINN grid of the run."""
    ctx = run_context(resolve_config(config, seed, out, None))
    model = stage_train_oscillator(ctx, [persistence.read_grid_csv(ctx.paths.pinn_grid)])
    console.print(f"{model.kind.value} oscillator -> {ctx.paths.oscillator}")


def rollout(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None):
    """Extrapolate with the trained oscillator."""
    ctx = run_context(resolve_config(config, seed, out, None))
    model = persistence.load_oscillator(ctx.paths.oscillator)
    grid = stage_rollout(ctx, model, persistence.read_grid_csv(ctx.paths.pinn_grid))
    console.print(f"rollout {grid.k_t}x{grid.d_in} -> {ctx.paths.rollout}")


def evaluate(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None):
    """Score the rollout against the reference and append the run to the ledger."""
    cfg = resolve_config(config, seed, out, None)
    ctx = run_context(cfg)
    metrics = stage_evaluate(
        ctx,
        persistence.read_grid_csv(ctx.paths.rollout),
        persistence.read_grid_csv(ctx.paths.reference),
        persistence.read_grid_csv(ctx.paths.pinn_grid),
    )
    record = build_record(ctx, metrics)
    with ledger(cfg.paths.out) as engine:
        record_runs(engine, [record])
    console.print_json(data=metrics["test"])
