import pytest
from pydantic import ValidationError

from numerics.errors import ArgumentError
from schemas.config import CellKind, ExperimentConfig
from services.config_loader import build_config, dump_config, flatten_keys, load_config, nest_keys, read_config_file


def test_dotted_and_nested_keys_are_equivalent(tmp_path):
    dotted = tmp_path / "dotted.yaml"
    dotted.write_text("oscillator.delta_t: 0.3\noscillator.cell: cornn\ngrid.k_t: 40\n")
    nested = tmp_path / "nested.yaml"
    nested.write_text("oscillator:\n  delta_t: 0.3\n  cell: cornn\ngrid:\n  k_t: 40\n")
    assert load_config(dotted) == load_config(nested)
    assert load_config(dotted).oscillator.cell is CellKind.CORNN


def test_nest_and_flatten_are_inverse():
    flat = {"a.b": 1, "a.c.d": [1, 2], "e": "x"}
    assert flatten_keys(nest_keys(flat)) == flat


def test_scalar_collision_rejected():
    with pytest.raises(ArgumentError):
        nest_keys({"grid": 3, "grid.k_t": 40})


def test_benchmark_defaults():
    assert build_config().grid.k_x == 256
    assert build_config({"benchmark.name": "allen_cahn"}).grid.k_x == 201
    schrodinger = build_config(overrides={"benchmark.name": "schrodinger"})
    assert schrodinger.grid.k_t == 160
    assert [phase.kind for phase in schrodinger.pinn.phases] == ["adam", "lbfgs"]
    assert build_config().solver.modes == 2048
    assert build_config().solver.dealias
    assert not build_config({"solver.dealias": False}).solver.dealias


def test_layer_precedence():
    config = build_config({"benchmark.name": "allen_cahn", "grid.k_x": 101}, {"grid.k_x": 51, "seed": None})
    assert config.grid.k_x == 51
    assert config.seed == 0


def test_grid_split_validation():
    with pytest.raises(ValidationError):
        build_config({"grid.k_t": 42})
    assert build_config({"grid.k_t": 40}).grid.horizon == 10


def test_unknown_benchmark():
    with pytest.raises(ArgumentError):
        build_config({"benchmark.name": "navier_stokes"})


def test_dump_config_round_trip(tmp_path):
    config = build_config({"benchmark.name": "burgers_parametric", "benchmark.nu": 0.015, "oscillator.lr": 0.02})
    path = tmp_path / "dumped.yaml"
    path.write_text(dump_config(config))
    assert load_config(path) == config


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_config_file(tmp_path / "absent.yaml")


def test_non_mapping_config_rejected(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ArgumentError):
        read_config_file(path)


def test_replicate_shifts_seed():
    config = ExperimentConfig(seed=3)
    assert config.for_replicate(2).seed == 5
    assert config.seed == 3
