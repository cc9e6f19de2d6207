from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console

from commands.common import ConfigOption, OutOption, SeedOption, resolve_config
from middleware.errors import stage_guard
from services.ledger import ledger, load_run_dir, load_runs
from services.report import write_report

console = Console()


def report(
    run_dirs: Annotated[Optional[list[Path]], typer.Argument(help="Run directories; defaults to the ledger.")] = None,
    sweep_id: Annotated[Optional[str], typer.Option("--sweep", help="Only runs of this sweep.")] = None,
    benchmark: Annotated[Optional[str], typer.Option("--benchmark")] = None,
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
):
    """Write metric tables, heatmap data and SVG figures."""
    cfg = resolve_config(config, seed, out, None)
    with stage_guard("report"):
        if run_dirs:
            records = [load_run_dir(path) for path in run_dirs]
        else:
            with ledger(cfg.paths.out) as engine:
                records = load_runs(engine, sweep_id=sweep_id, benchmark=benchmark)
        written = write_report(records, Path(cfg.paths.out) / "report")
    console.print(f"wrote {len(written)} files to {Path(cfg.paths.out) / 'report'}")
