import hashlib
import json
import logging
import os
from pathlib import Path

from numerics.errors import ArgumentError
from pdes.benchmarks import PdeSpec
from schemas.grid import GridSolution
from services.persistence import read_grid_csv, write_grid_csv
from solvers.beam import solve_beam
from solvers.request import GridRequest
from solvers.spectral import solve_allen_cahn, solve_burgers, solve_schrodinger

logger = logging.getLogger("piml.solvers")

CACHE_FORMAT = 1


def solve_reference(spec: PdeSpec, request: GridRequest) -> GridSolution:
    if spec.name in ("burgers", "burgers_parametric"):
        return solve_burgers(spec.nu, request)
    if spec.name == "allen_cahn":
        return solve_allen_cahn(request)
    if spec.name == "schrodinger":
        return solve_schrodinger(request)
    if spec.name == "euler_bernoulli":
        return solve_beam(request)
    raise ArgumentError(f"no reference solver for {spec.name!r}")


def cache_root(default: Path) -> Path:
    return Path(os.getenv("PIML_CACHE_DIR") or default)


def reference_key(spec: PdeSpec, request: GridRequest) -> str:
    # burgers and burgers_parametric share solutions at equal viscosity
    family = "burgers" if spec.name.startswith("burgers") else spec.name
    payload = {"format": CACHE_FORMAT, "benchmark": family, "nu": spec.nu, "window": "full", **request.model_dump()}
    digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()
    return f"{family}-{digest[:16]}"


def cached_reference(spec: PdeSpec, request: GridRequest, cache_dir: Path, *, refresh: bool = False) -> GridSolution:
    """Reference grid from ``cache_dir`` when present, else solved and stored."""
    path = cache_dir / f"{reference_key(spec, request)}.csv"
    if path.exists() and not refresh:
        logger.info("reference cache hit", extra={"benchmark": spec.name, "path": str(path)})
        return read_grid_csv(path)
    grid = solve_reference(spec, request)
    write_grid_csv(grid, path)
    logger.info("reference cached", extra={"benchmark": spec.name, "path": str(path)})
    return grid
