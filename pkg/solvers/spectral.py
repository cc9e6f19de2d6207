"""Fourier pseudo-spectral reference solvers on periodic domains.

Burgers uses an integrating-factor RK4 with optional 2/3-rule dealiasing, Allen-Cahn
exponential time differencing RK4, Schrodinger Strang split-step. Solutions
are carried on ``modes`` equispaced points of ``[x_min, x_max)`` and sampled
onto the requested points by trigonometric interpolation.
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy import fft

from numerics.array import check_finite
from numerics.errors import ArgumentError
from pdes.benchmarks import (
    ALLEN_CAHN_DIFFUSION,
    DomainSpec,
    allen_cahn_initial,
    burgers_initial,
    make_benchmark,
    schrodinger_initial,
)
from schemas.grid import GridSolution
from solvers.request import GridRequest

logger = logging.getLogger("piml.solvers")

# called with (internal step index, field on the periodic grid)
Observer = Callable[[int, np.ndarray], None]

ETD_CONTOUR_POINTS = 32


class PeriodicGrid:
    def __init__(self, domain: DomainSpec, modes: int):
        self.x0 = domain.x_min
        self.length = domain.length
        self.modes = modes
        self.x = self.x0 + self.length * np.arange(modes) / modes
        scale = 2.0 * math.pi / self.length
        self.k_real = scale * fft.rfftfreq(modes, d=1.0 / modes)
        self.k_complex = scale * fft.fftfreq(modes, d=1.0 / modes)

    def dealias_mask(self) -> np.ndarray:
        index = np.arange(self.k_real.size)
        return (index < self.modes / 3.0).astype(np.float64)

    def real_sampler(self, xs: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
        """Evaluate a real field from its rfft coefficients at arbitrary points."""
        weights = np.full(self.k_real.size, 2.0)
        weights[0] = 1.0
        weights[-1] = 1.0
        phase = np.exp(1j * np.outer(xs - self.x0, self.k_real)) * (weights / self.modes)
        return lambda coeffs: (phase @ coeffs).real

    def complex_sampler(self, xs: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
        phase = np.exp(1j * np.outer(xs - self.x0, self.k_complex)) / self.modes
        return lambda coeffs: phase @ coeffs


def _advance(
    request: GridRequest,
    state: np.ndarray,
    step: Callable[[np.ndarray], np.ndarray],
    sample: Callable[[np.ndarray], np.ndarray],
    physical: Callable[[np.ndarray], np.ndarray],
    observer: Optional[Observer],
    name: str,
) -> list[np.ndarray]:
    substeps, dt = request.substeps()
    logger.info("reference solve", extra={"benchmark": name, "levels": request.levels, "substeps": substeps, "dt": dt})
    rows = []
    counter = 0
    if observer is not None:
        observer(counter, physical(state))
    for level in range(1, request.levels):
        for _ in range(substeps):
            state = step(state)
            counter += 1
            if observer is not None:
                observer(counter, physical(state))
        rows.append(check_finite(sample(state), context=f"{name} reference level {level}"))
    return rows


def _grid(request: GridRequest, first_row: np.ndarray, rows: list[np.ndarray], n_channels: int = 1) -> GridSolution:
    values = np.vstack([first_row] + rows) if rows else first_row[None, :]
    return GridSolution(time_step=request.time_step, n_channels=n_channels, xs=request.xs, values=values)


def _prepare(name: str, request: GridRequest, overrides: Optional[dict] = None):
    spec, domain = make_benchmark(name, overrides)
    request.check_within(domain)
    return spec, domain, PeriodicGrid(domain, request.modes)


def solve_burgers(nu: float, request: GridRequest, observer: Optional[Observer] = None) -> GridSolution:
    """Viscous Burgers with u(x,0) = -sin(pi x) on the odd periodic extension of [-1, 1]."""
    if not nu > 0:
        raise ArgumentError(f"viscosity must be positive, got {nu}")
    _, _, grid = _prepare("burgers", request, {"nu": nu})
    _, dt = request.substeps()
    k = grid.k_real
    mask = grid.dealias_mask() if request.dealias else np.ones(k.size)
    half = np.exp(-nu * k**2 * dt / 2.0)
    full = half * half

    def nonlinear(coeffs: np.ndarray) -> np.ndarray:
        u = fft.irfft(coeffs * mask, n=grid.modes)
        return -0.5j * k * mask * fft.rfft(u * u)

    def step(v: np.ndarray) -> np.ndarray:
        a = dt * nonlinear(v)
        b = dt * nonlinear(half * (v + a / 2.0))
        c = dt * nonlinear(half * v + b / 2.0)
        d = dt * nonlinear(full * v + half * c)
        return full * v + (full * a + 2.0 * half * (b + c) + d) / 6.0

    state = fft.rfft(burgers_initial(grid.x)[0])
    rows = _advance(request, state, step, grid.real_sampler(request.xs), lambda v: fft.irfft(v, n=grid.modes), observer, "burgers")
    return _grid(request, burgers_initial(request.xs)[0], rows)


def etdrk4_coefficients(linear: np.ndarray, dt: float, contour_points: int = ETD_CONTOUR_POINTS) -> dict[str, np.ndarray]:
    """Exponential time differencing RK4 weights, evaluated by contour means to avoid cancellation."""
    roots = np.exp(1j * math.pi * (np.arange(1, contour_points + 1) - 0.5) / contour_points)
    lr = dt * linear[:, None] + roots[None, :]
    exp_lr = np.exp(lr)
    return {
        "E": np.exp(dt * linear),
        "E2": np.exp(dt * linear / 2.0),
        "Q": dt * np.real(np.mean((np.exp(lr / 2.0) - 1.0) / lr, axis=1)),
        "f1": dt * np.real(np.mean((-4.0 - lr + exp_lr * (4.0 - 3.0 * lr + lr**2)) / lr**3, axis=1)),
        "f2": dt * np.real(np.mean((2.0 + lr + exp_lr * (lr - 2.0)) / lr**3, axis=1)),
        "f3": dt * np.real(np.mean((-4.0 - 3.0 * lr - lr**2 + exp_lr * (4.0 - lr)) / lr**3, axis=1)),
    }


def solve_allen_cahn(request: GridRequest, observer: Optional[Observer] = None) -> GridSolution:
    """u_t = 1e-4 u_xx + 5u - 5u^3 on [-1, 1] periodic, u(x,0) = x^2 cos(pi x) sech(x)."""
    _, _, grid = _prepare("allen_cahn", request)
    _, dt = request.substeps()
    w = etdrk4_coefficients(-ALLEN_CAHN_DIFFUSION * grid.k_real**2, dt)
    E, E2, Q, f1, f2, f3 = w["E"], w["E2"], w["Q"], w["f1"], w["f2"], w["f3"]

    def nonlinear(coeffs: np.ndarray) -> np.ndarray:
        u = fft.irfft(coeffs, n=grid.modes)
        return fft.rfft(5.0 * u - 5.0 * u**3)

    def step(v: np.ndarray) -> np.ndarray:
        nv = nonlinear(v)
        a = E2 * v + Q * nv
        na = nonlinear(a)
        b = E2 * v + Q * na
        nb = nonlinear(b)
        c = E2 * a + Q * (2.0 * nb - nv)
        nc = nonlinear(c)
        return E * v + nv * f1 + 2.0 * (na + nb) * f2 + nc * f3

    state = fft.rfft(allen_cahn_initial(grid.x)[0])
    rows = _advance(request, state, step, grid.real_sampler(request.xs), lambda v: fft.irfft(v, n=grid.modes), observer, "allen_cahn")
    return _grid(request, allen_cahn_initial(request.xs)[0], rows)


def solve_schrodinger(request: GridRequest, observer: Optional[Observer] = None) -> GridSolution:
    """i h_t + 0.5 h_xx + |h|^2 h = 0 on [-5, 5] periodic, h(x,0) = 2 sech(x); channels (Re h, Im h)."""
    _, _, grid = _prepare("schrodinger", request)
    _, dt = request.substeps()
    linear = np.exp(-0.5j * grid.k_complex**2 * dt)

    def step(h: np.ndarray) -> np.ndarray:
        h = h * np.exp(0.5j * dt * np.abs(h) ** 2)
        h = fft.ifft(linear * fft.fft(h))
        return h * np.exp(0.5j * dt * np.abs(h) ** 2)

    interpolate = grid.complex_sampler(request.xs)

    def sample(h: np.ndarray) -> np.ndarray:
        values = interpolate(fft.fft(h))
        return np.concatenate([values.real, values.imag])

    initial = schrodinger_initial(grid.x)
    state = initial[0] + 1j * initial[1]
    rows = _advance(request, state.astype(np.complex128), step, sample, lambda h: h, observer, "schrodinger")
    return _grid(request, schrodinger_initial(request.xs).reshape(-1), rows, n_channels=2)


def periodic_derivative(values: np.ndarray, length: float) -> np.ndarray:
    modes = values.size
    k = 2.0 * math.pi / length * fft.rfftfreq(modes, d=1.0 / modes)
    coeffs = 1j * k * fft.rfft(values)
    if modes % 2 == 0:
        coeffs[-1] = 0.0
    return fft.irfft(coeffs, n=modes)


def allen_cahn_energy(u: np.ndarray, length: float) -> float:
    """Lyapunov energy of Allen-Cahn on a periodic grid: int 5e-5 u_x^2 + 5/4 (u^2 - 1)^2 dx."""
    u_x = periodic_derivative(u, length)
    density = 0.5 * ALLEN_CAHN_DIFFUSION * u_x**2 + 1.25 * (u**2 - 1.0) ** 2
    return float(length * density.mean())


def schrodinger_mass(h: np.ndarray, length: float) -> float:
    """Discrete int |h|^2 dx on a periodic grid."""
    return float(length * np.mean(np.abs(h) ** 2))
