import numpy as np
import pytest

from services.config_loader import build_config


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_config(tmp_path, monkeypatch):
    """Burgers on an 8 x 16 grid with untrained networks; runs in seconds."""
    monkeypatch.setenv("PIML_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("PIML_LEDGER_URL", raising=False)
    monkeypatch.delenv("PIML_WORKERS", raising=False)
    return build_config(
        {
            "benchmark.name": "burgers",
            "grid.k_t": 8,
            "grid.k_x": 16,
            "solver.modes": 64,
            "solver.dt_max": 1e-3,
            "pinn.hidden": [6, 6],
            "pinn.phases": [{"kind": "adam", "epochs": 2, "lr": 1e-3}],
            "pinn.residual_points": 30,
            "pinn.boundary_points": 20,
            "oscillator.hidden": 4,
            "oscillator.epochs": 2,
            "paths.out": str(tmp_path / "runs"),
            "paths.cache": str(tmp_path / "cache"),
        }
    )
