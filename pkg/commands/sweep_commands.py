from typing import Annotated, Optional

import typer
from rich.console import Console
from rich.table import Table

from commands.common import CacheOption, ConfigOption, OutOption, ResumeOption, SeedOption, resolve_config
from middleware.errors import stage_guard
from services.ledger import ledger, record_runs
from services.sweep import SWEEP_AXES, run_sweep

console = Console()


def sweep(
    axis: Annotated[str, typer.Option("--axis", help=f"One of: {', '.join(SWEEP_AXES)}.")] = "cells",
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    cache: CacheOption = None,
    resume: ResumeOption = False,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1, help="Parallel runs.")] = None,
):
    """Run a study along one axis and print mean/std per point."""
    cfg = resolve_config(config, seed, out, cache)
    with stage_guard("sweep", axis=axis):
        sweep_id, records, summary = run_sweep(cfg, axis, resume=resume, workers=workers)
    with ledger(cfg.paths.out) as engine:
        record_runs(engine, records)

    table = Table(title=sweep_id)
    for column in summary.columns:
        table.add_column(str(column))
    for row in summary.itertuples(index=False):
        table.add_row(*(f"{value:.4g}" if isinstance(value, float) else str(value) for value in row))
    console.print(table)
