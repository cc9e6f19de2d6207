"""Experiment configuration from YAML with dotted keys.

Layers, later wins: model defaults, per-benchmark defaults, the config file,
command-line overrides. ``oscillator.delta_t: 0.01`` and the nested
``oscillator: {delta_t: 0.01}`` are equivalent.
"""

import logging
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from numerics.errors import ArgumentError
from schemas.config import ExperimentConfig

logger = logging.getLogger("piml.config")

_ADAM_THEN_LBFGS = [{"kind": "adam", "epochs": 15000, "lr": 1e-3}, {"kind": "lbfgs", "epochs": 2000}]

BENCHMARK_DEFAULTS: dict[str, dict[str, Any]] = {
    "burgers": {},
    "burgers_parametric": {},
    "euler_bernoulli": {
        "pinn.residual_points": 10000,
        "pinn.boundary_points": 6000,
        "oscillator.epochs": 200000,
    },
    "allen_cahn": {
        "grid.k_x": 201,
        "pinn.phases": _ADAM_THEN_LBFGS,
        "pinn.residual_points": 8000,
        "pinn.boundary_points": 1200,
        "pinn.ic_fraction": 2 / 3,
    },
    "schrodinger": {
        "grid.k_t": 160,
        "pinn.hidden": [100, 100, 100, 100],
        "pinn.phases": _ADAM_THEN_LBFGS,
        "pinn.residual_points": 10000,
        "pinn.boundary_points": 300,
        "pinn.ic_fraction": 2 / 3,
        "oscillator.epochs": 30000,
    },
}


def flatten_keys(mapping: Mapping[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in mapping.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping) and value:
            flat.update(flatten_keys(value, f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def nest_keys(flat: Mapping[str, Any]) -> dict[str, Any]:
    nested: dict[str, Any] = {}
    for dotted, value in flat.items():
        parts = dotted.split(".")
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ArgumentError(f"config key {dotted!r} collides with a scalar at {part!r}")
            node = child
        node[parts[-1]] = value
    return nested


def read_config_file(path: Path) -> dict[str, Any]:
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    data = yaml.safe_load(path.read_text()) or {}
    if not isinstance(data, Mapping):
        raise ArgumentError(f"{path}: top level must be a mapping of keys")
    return flatten_keys(data)


def build_config(file_keys: Optional[Mapping[str, Any]] = None, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    file_keys = dict(file_keys or {})
    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
    name = overrides.get("benchmark.name", file_keys.get("benchmark.name", "burgers"))
    if name not in BENCHMARK_DEFAULTS:
        raise ArgumentError(f"unknown benchmark {name!r}")
    merged = {**BENCHMARK_DEFAULTS[name], **file_keys, **overrides}
    return ExperimentConfig.model_validate(nest_keys(merged))


def load_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    file_keys = read_config_file(path) if path is not None else {}
    config = build_config(file_keys, overrides)
    logger.info("config loaded", extra={"path": str(path) if path else None, "benchmark": config.benchmark.name})
    return config


def dump_config(config: ExperimentConfig) -> str:
    """Flat dotted-key YAML that loads back to the same config."""
    return yaml.safe_dump(flatten_keys(config.model_dump(mode="json")), sort_keys=True)
