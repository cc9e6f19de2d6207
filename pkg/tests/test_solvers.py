import math

import numpy as np
import pytest

from numerics.errors import ArgumentError
from pdes.benchmarks import make_benchmark
from services.persistence import read_grid_csv
from solvers.beam import solve_beam
from solvers.cache import cache_root, cached_reference, reference_key, solve_reference
from solvers.request import GridRequest
from solvers.spectral import (
    allen_cahn_energy,
    etdrk4_coefficients,
    schrodinger_mass,
    solve_allen_cahn,
    solve_burgers,
    solve_schrodinger,
)


def _request(name: str, k_t: int = 8, k_x: int = 33, modes: int = 256, dt_max: float = 1e-3, overrides=None) -> GridRequest:
    _, domain = make_benchmark(name, overrides)
    return GridRequest.for_domain(domain, k_t, k_x, modes=modes, dt_max=dt_max)


def test_request_layout():
    request = _request("burgers", k_t=80, k_x=256)
    assert request.levels == 100
    assert request.times[79] == pytest.approx(0.8)
    count, dt = request.substeps()
    assert count * dt == pytest.approx(request.time_step)
    assert dt <= request.dt_max


def test_request_validation():
    _, domain = make_benchmark("burgers")
    with pytest.raises(ArgumentError):
        GridRequest(x_min=-2.0, x_max=1.0, k_x=8, time_step=0.1, levels=3).check_within(domain)
    with pytest.raises(ArgumentError):
        GridRequest(x_min=-1.0, x_max=1.0, k_x=8, time_step=0.1, levels=3, modes=65).check_within(domain)


def test_burgers_initial_row_and_odd_symmetry():
    request = _request("burgers", k_x=257, modes=512)
    grid = solve_burgers(0.01 / math.pi, request)
    assert grid.values.shape == (10, 257)
    np.testing.assert_allclose(grid.values[0], -np.sin(np.pi * grid.xs), rtol=0, atol=1e-12)
    centre = int(np.argmin(np.abs(grid.xs)))
    assert grid.xs[centre] == 0.0
    assert np.max(np.abs(grid.values[:, centre])) <= 1e-10
    np.testing.assert_allclose(grid.values, -grid.values[:, ::-1], rtol=0, atol=1e-9)


def _cole_hopf_burgers(nu: float, xs: np.ndarray, t: float) -> np.ndarray:
    """Exact solution for u(x,0) = -sin(pi x), by trapezoid quadrature in the heat-kernel variable."""
    if t == 0.0:
        return -np.sin(np.pi * xs)
    z = np.linspace(-12.0, 12.0, 4001)
    y = xs[:, None] - math.sqrt(4.0 * nu * t) * z[None, :]
    exponent = -np.cos(np.pi * y) / (2.0 * np.pi * nu) - z[None, :] ** 2
    weight = np.exp(exponent - exponent.max(axis=1, keepdims=True))
    return -np.trapezoid(np.sin(np.pi * y) * weight, z, axis=1) / np.trapezoid(weight, z, axis=1)


def test_burgers_matches_cole_hopf_at_default_resolution():
    nu = 0.01 / math.pi
    _, domain = make_benchmark("burgers")
    request = GridRequest.for_domain(domain, 8, 33)
    assert request.modes == 2048 and request.dt_max == 1e-4 and request.dealias
    grid = solve_burgers(nu, request)
    errors = [np.max(np.abs(grid.values[n] - _cole_hopf_burgers(nu, grid.xs, t))) for n, t in enumerate(grid.times)]
    assert max(errors) <= 1e-7


def test_burgers_dealias_flag_reaches_the_solver():
    masked = solve_burgers(0.02, _request("burgers", k_t=4, k_x=17, modes=128))
    full = solve_burgers(0.02, _request("burgers", k_t=4, k_x=17, modes=128).model_copy(update={"dealias": False}))
    assert np.max(np.abs(masked.values - full.values)) > 1e-6
    np.testing.assert_array_equal(masked.values[0], full.values[0])


def test_burgers_rejects_non_positive_viscosity():
    with pytest.raises(ArgumentError):
        solve_burgers(0.0, _request("burgers"))


def test_allen_cahn_initial_row_periodicity_and_energy():
    request = _request("allen_cahn", k_x=41, modes=512)
    energies = []
    grid = solve_allen_cahn(request, observer=lambda n, u: energies.append(allen_cahn_energy(u, 2.0)))
    x = grid.xs
    np.testing.assert_allclose(grid.values[0], x**2 * np.cos(np.pi * x) / np.cosh(x), rtol=0, atol=1e-12)
    assert np.max(np.abs(grid.values[:, 0] - grid.values[:, -1])) <= 1e-10
    assert len(energies) == request.substeps()[0] * (request.levels - 1) + 1
    assert np.all(np.diff(energies) <= 1e-10)
    assert energies[-1] < energies[0]


def test_etdrk4_coefficients_match_direct_formulas_away_from_zero():
    linear = np.array([-3.0, -40.0])
    dt = 0.05
    w = etdrk4_coefficients(linear, dt)
    z = dt * linear
    np.testing.assert_allclose(w["Q"], dt * (np.exp(z / 2) - 1) / z, rtol=1e-10)
    np.testing.assert_allclose(w["f2"], dt * (2 + z + np.exp(z) * (z - 2)) / z**3, rtol=1e-8)
    assert np.all(np.isfinite(etdrk4_coefficients(np.zeros(3), dt)["f1"]))


def test_schrodinger_mass_and_symmetry():
    request = _request("schrodinger", k_x=33, modes=512, dt_max=2e-3)
    masses = []
    grid = solve_schrodinger(request, observer=lambda n, h: masses.append(schrodinger_mass(h, 10.0)))
    assert grid.n_channels == 2 and grid.values.shape == (10, 66)
    np.testing.assert_allclose(grid.values[0, :33], 2.0 / np.cosh(grid.xs), rtol=0, atol=1e-12)
    np.testing.assert_array_equal(grid.values[0, 33:], np.zeros(33))
    assert masses[0] == pytest.approx(8.0 * math.tanh(5.0), abs=1e-6)
    assert masses[0] == pytest.approx(7.99927, abs=1e-5)
    assert max(abs(m - masses[0]) for m in masses) / masses[0] <= 1e-8
    magnitude = grid.magnitude().values
    np.testing.assert_allclose(magnitude, magnitude[:, ::-1], rtol=0, atol=1e-9)


def test_beam_reference_values():
    _, domain = make_benchmark("euler_bernoulli")
    request = GridRequest.for_domain(domain, 8, 5)
    grid = solve_beam(request)
    assert grid.values[0, 2] == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_array_equal(grid.values[:, 0], np.zeros(10))
    expected = np.sin(grid.xs)[None, :] * np.cos(4 * np.pi * grid.times)[:, None]
    np.testing.assert_allclose(grid.values, expected, rtol=0, atol=1e-15)


def test_solve_reference_dispatch():
    spec, domain = make_benchmark("euler_bernoulli")
    grid = solve_reference(spec, GridRequest.for_domain(domain, 4, 6))
    assert grid.k_t == 5


def test_cache_round_trip_is_bit_identical(tmp_path):
    spec, _ = make_benchmark("allen_cahn")
    request = _request("allen_cahn", k_t=4, k_x=9, modes=64)
    first = cached_reference(spec, request, tmp_path)
    files = list(tmp_path.glob("*.csv"))
    assert len(files) == 1
    second = cached_reference(spec, request, tmp_path)
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.xs, second.xs)
    assert np.array_equal(read_grid_csv(files[0]).times, first.times)


def test_cache_keys():
    burgers, _ = make_benchmark("burgers", {"nu": 0.05})
    parametric, _ = make_benchmark("burgers_parametric", {"nu": 0.05})
    other, _ = make_benchmark("burgers_parametric", {"nu": 0.015})
    request = _request("burgers")
    assert reference_key(burgers, request) == reference_key(parametric, request)
    assert reference_key(parametric, request) != reference_key(other, request)
    assert reference_key(burgers, request) != reference_key(burgers, request.model_copy(update={"k_x": 64}))
    assert reference_key(burgers, request) != reference_key(burgers, request.model_copy(update={"dealias": False}))


def test_cache_root_prefers_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("PIML_CACHE_DIR", str(tmp_path / "env"))
    assert cache_root(tmp_path / "config") == tmp_path / "env"
    monkeypatch.delenv("PIML_CACHE_DIR")
    assert cache_root(tmp_path / "config") == tmp_path / "config"


@pytest.mark.slow
def test_burgers_self_convergence_under_dt_halving():
    coarse = solve_burgers(0.01 / math.pi, _request("burgers", k_t=80, k_x=256, modes=2048, dt_max=1e-4))
    fine = solve_burgers(0.01 / math.pi, _request("burgers", k_t=80, k_x=256, modes=2048, dt_max=5e-5))
    assert np.max(np.abs(coarse.values - fine.values)) <= 1e-8


@pytest.mark.slow
def test_allen_cahn_self_convergence_under_dt_halving():
    coarse = solve_allen_cahn(_request("allen_cahn", k_t=80, k_x=201, modes=2048, dt_max=1e-4))
    fine = solve_allen_cahn(_request("allen_cahn", k_t=80, k_x=201, modes=2048, dt_max=5e-5))
    assert np.max(np.abs(coarse.values - fine.values)) <= 1e-7


@pytest.mark.slow
def test_schrodinger_full_horizon_mass_and_second_order_convergence():
    grids = {}
    masses = []
    for dt_max in (4e-4, 2e-4, 1e-4):
        observer = (lambda n, h: masses.append(schrodinger_mass(h, 10.0))) if dt_max == 1e-4 else None
        grids[dt_max] = solve_schrodinger(_request("schrodinger", k_t=80, k_x=129, modes=2048, dt_max=dt_max), observer)
    assert grids[1e-4].times[-1] >= math.pi / 2
    assert max(abs(m - masses[0]) for m in masses) / masses[0] <= 1e-8
    coarse = np.max(np.abs(grids[4e-4].values - grids[2e-4].values))
    fine = np.max(np.abs(grids[2e-4].values - grids[1e-4].values))
    assert 3.0 <= coarse / fine <= 5.0
