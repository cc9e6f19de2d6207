from pathlib import Path
from typing import Annotated, Optional

import typer

from middleware.errors import stage_guard
from schemas.config import ExperimentConfig
from services.config_loader import load_config
from services.pipeline import RunContext, RunPaths, run_id_for

ConfigOption = Annotated[Optional[Path], typer.Option("--config", "-c", help="YAML file of dotted config keys.")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Base seed; replicates use seed + index.")]
OutOption = Annotated[Optional[Path], typer.Option("--out", help="Output directory for runs and reports.")]
CacheOption = Annotated[Optional[Path], typer.Option("--cache", help="Reference-solution cache directory.")]
ResumeOption = Annotated[bool, typer.Option("--resume", help="Reuse artifacts already in the run directory.")]


def resolve_config(config: Optional[Path], seed: Optional[int], out: Optional[Path], cache: Optional[Path]) -> ExperimentConfig:
    overrides = {"seed": seed, "paths.out": str(out) if out else None, "paths.cache": str(cache) if cache else None}
    with stage_guard("config", path=str(config) if config else None):
        return load_config(config, overrides)


def run_context(config: ExperimentConfig, resume: bool = False) -> RunContext:
    return RunContext(config=config, paths=RunPaths(Path(config.paths.out) / run_id_for(config)), resume=resume)
