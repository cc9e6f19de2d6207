from rich.console import Console

from commands.common import CacheOption, ConfigOption, OutOption, ResumeOption, SeedOption, resolve_config
from services.ledger import ledger, record_runs
from services.pipeline import run_experiment

console = Console()


def run(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None, cache: CacheOption = None, resume: ResumeOption = False):
    """Run every stage for one configuration and append the run to the ledger."""
    cfg = resolve_config(config, seed, out, cache)
    record = run_experiment(cfg, resume=resume)
    with ledger(cfg.paths.out) as engine:
        record_runs(engine, [record])
    console.print(f"[bold green]{record.run_id}[/] relative_l2={record.relative_l2:.6g} explained_variance={record.explained_variance:.6g} "
                  f"max_error={record.max_error:.6g} mae={record.mean_absolute_error:.6g}")
