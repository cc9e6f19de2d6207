"""Benchmark problems: domain, residual operator, initial and boundary data.

Residual callables receive the derivatives of the field as a mapping
``(order_x, order_t) -> array[n_channels, N]`` and return one residual row per
channel, before the source term is subtracted.
"""

import math
from enum import Enum
from typing import Annotated, Any, Callable, Mapping, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from numerics import tape as ad
from numerics.array import check_finite
from numerics.errors import ArgumentError
from numerics.jet import FieldFn, field_derivatives

Derivatives = Mapping[tuple[int, int], Any]

BURGERS_NU = 0.01 / math.pi
ALLEN_CAHN_DIFFUSION = 1e-4
TRAIN_FRACTION = 0.8


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"
    SIMPLY_SUPPORTED = "simply_supported"


class DomainSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    t_train_end: Annotated[float, Field(gt=0)]
    t_test_end: Annotated[float, Field(gt=0)]

    @model_validator(mode="after")
    def _check(self):
        if not self.x_min < self.x_max:
            raise ArgumentError(f"x_min {self.x_min} must be below x_max {self.x_max}")
        if not self.t_train_end < self.t_test_end:
            raise ArgumentError("t_train_end must precede t_test_end")
        return self

    @classmethod
    def split(cls, x_min: float, x_max: float, t_test_end: float) -> "DomainSpec":
        return cls(x_min=x_min, x_max=x_max, t_train_end=TRAIN_FRACTION * t_test_end, t_test_end=t_test_end)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


class IcTerm(BaseModel):
    """``d^order_t u / dt^order_t (x, 0) = target(x)``; target returns ``[n_channels, N]``."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order_t: Annotated[int, Field(ge=0, le=1)] = 0
    target: Callable[[np.ndarray], np.ndarray]


class PdeSpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    n_channels: Annotated[int, Field(ge=1, le=2)] = 1
    derivative_orders: tuple[tuple[int, int], ...]
    residual: Callable[[Derivatives, Optional[float]], list]
    ic_terms: tuple[IcTerm, ...]
    bc_kind: BoundaryKind
    source: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    analytic: Optional[Callable[[Any, Any], Any]] = None
    nu: Optional[float] = None

    @property
    def bc_orders(self) -> tuple[tuple[int, int], ...]:
        if self.bc_kind is BoundaryKind.DIRICHLET:
            return ((0, 0),)
        if self.bc_kind is BoundaryKind.PERIODIC:
            return ((0, 0), (1, 0))
        return ((0, 0), (2, 0))


def _burgers_residual(d: Derivatives, nu: Optional[float]) -> list:
    u, u_t, u_x, u_xx = d[(0, 0)][0], d[(0, 1)][0], d[(1, 0)][0], d[(2, 0)][0]
    return [u_t + u * u_x - nu * u_xx]


def _allen_cahn_residual(d: Derivatives, nu: Optional[float]) -> list:
    u, u_t, u_xx = d[(0, 0)][0], d[(0, 1)][0], d[(2, 0)][0]
    return [u_t - ALLEN_CAHN_DIFFUSION * u_xx + 5.0 * u**3 - 5.0 * u]


def _schrodinger_residual(d: Derivatives, nu: Optional[float]) -> list:
    # u_t - 0.5i u_xx - i|u|^2 u = 0 with u = p + iq
    p, q = d[(0, 0)][0], d[(0, 0)][1]
    p_t, q_t = d[(0, 1)][0], d[(0, 1)][1]
    p_xx, q_xx = d[(2, 0)][0], d[(2, 0)][1]
    mass = p * p + q * q
    return [p_t + 0.5 * q_xx + mass * q, q_t - 0.5 * p_xx - mass * p]


def _beam_residual(d: Derivatives, nu: Optional[float]) -> list:
    return [d[(0, 2)][0] + d[(4, 0)][0]]


def _beam_source(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    return (1.0 - 16.0 * math.pi**2) * np.sin(x) * np.cos(4.0 * math.pi * t)


def beam_solution(x: Any, t: Any) -> Any:
    """sin(x) cos(4 pi t); accepts arrays or jets."""
    if hasattr(x, "sin"):
        return x.sin() * (4.0 * math.pi * t).cos()
    return np.sin(x) * np.cos(4.0 * math.pi * np.asarray(t))


def _single(values: np.ndarray) -> np.ndarray:
    return values[None, :]


def burgers_initial(x: np.ndarray) -> np.ndarray:
    return _single(-np.sin(math.pi * x))


def allen_cahn_initial(x: np.ndarray) -> np.ndarray:
    return _single(x**2 * np.cos(math.pi * x) / np.cosh(x))


def schrodinger_initial(x: np.ndarray) -> np.ndarray:
    return np.vstack([2.0 / np.cosh(x), np.zeros_like(x)])


def beam_initial(x: np.ndarray) -> np.ndarray:
    return _single(np.sin(x))


def beam_initial_velocity(x: np.ndarray) -> np.ndarray:
    return _single(np.zeros_like(x))


BENCHMARKS = ("burgers", "allen_cahn", "schrodinger", "euler_bernoulli", "burgers_parametric")
_OVERRIDABLE = {"nu", "t_test_end"}


def make_benchmark(name: str, overrides: Optional[Mapping[str, Any]] = None) -> tuple[PdeSpec, DomainSpec]:
    overrides = dict(overrides or {})
    unknown = set(overrides) - _OVERRIDABLE
    if unknown:
        raise ArgumentError(f"unknown benchmark override(s): {sorted(unknown)}")
    if name not in BENCHMARKS:
        raise ArgumentError(f"unknown benchmark {name!r}; expected one of {BENCHMARKS}")
    if "nu" in overrides and name not in ("burgers", "burgers_parametric"):
        raise ArgumentError(f"benchmark {name!r} has no viscosity parameter")

    if name in ("burgers", "burgers_parametric"):
        default_nu = BURGERS_NU if name == "burgers" else 0.05
        nu = float(overrides.get("nu", default_nu))
        if nu <= 0:
            raise ArgumentError(f"viscosity must be positive, got {nu}")
        domain = DomainSpec.split(-1.0, 1.0, float(overrides.get("t_test_end", 1.0)))
        spec = PdeSpec(
            name=name,
            derivative_orders=((0, 1), (1, 0), (2, 0)),
            residual=_burgers_residual,
            ic_terms=(IcTerm(target=burgers_initial),),
            bc_kind=BoundaryKind.DIRICHLET,
            nu=nu,
        )
    elif name == "allen_cahn":
        domain = DomainSpec.split(-1.0, 1.0, float(overrides.get("t_test_end", 1.0)))
        spec = PdeSpec(
            name=name,
            derivative_orders=((0, 1), (2, 0)),
            residual=_allen_cahn_residual,
            ic_terms=(IcTerm(target=allen_cahn_initial),),
            bc_kind=BoundaryKind.PERIODIC,
        )
    elif name == "schrodinger":
        domain = DomainSpec.split(-5.0, 5.0, float(overrides.get("t_test_end", math.pi / 2)))
        spec = PdeSpec(
            name=name,
            n_channels=2,
            derivative_orders=((0, 1), (2, 0)),
            residual=_schrodinger_residual,
            ic_terms=(IcTerm(target=schrodinger_initial),),
            bc_kind=BoundaryKind.PERIODIC,
        )
    else:
        domain = DomainSpec.split(0.0, math.pi, float(overrides.get("t_test_end", 1.0)))
        spec = PdeSpec(
            name=name,
            derivative_orders=((0, 2), (4, 0)),
            residual=_beam_residual,
            ic_terms=(IcTerm(target=beam_initial), IcTerm(order_t=1, target=beam_initial_velocity)),
            bc_kind=BoundaryKind.SIMPLY_SUPPORTED,
            source=_beam_source,
            analytic=beam_solution,
        )
    return spec, domain


def residual_rows(spec: PdeSpec, derivs: Derivatives, x: np.ndarray, t: np.ndarray) -> list:
    """Per-channel residual ``N(u) - f`` from precomputed derivatives."""
    rows = spec.residual(derivs, spec.nu)
    if spec.source is not None:
        rows[0] = rows[0] - spec.source(x, t)
    return rows


def residual_eval(spec: PdeSpec, field: FieldFn, x: Any, t: Any, domain: Optional[DomainSpec] = None) -> np.ndarray:
    """Residual of ``field`` at the points (x, t), one row per channel."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if domain is not None:
        tol = 1e-12 * max(1.0, domain.length)
        if np.any(x < domain.x_min - tol) or np.any(x > domain.x_max + tol) or np.any(t < 0):
            raise ArgumentError("residual requested outside the spatial domain or before t=0")
    derivs = field_derivatives(field, x, t, spec.derivative_orders)
    for key, value in derivs.items():
        check_finite(ad.value_of(value), context=f"field derivative {key}")
    rows = residual_rows(spec, derivs, x, t)
    return np.vstack([np.broadcast_to(ad.value_of(row), x.shape) for row in rows])
