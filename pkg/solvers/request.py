from typing import Annotated, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import ArgumentError
from pdes.benchmarks import DomainSpec
from schemas.grid import DEFAULT_MODES, grid_time_step, time_levels


class GridRequest(BaseModel):
    """Output grid of a reference solve: ``levels`` time levels from t=0, ``k_x`` uniform points."""

    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    k_x: Annotated[int, Field(ge=2)]
    time_step: Annotated[float, Field(gt=0)]
    levels: Annotated[int, Field(ge=1)]
    modes: Annotated[int, Field(ge=16)] = DEFAULT_MODES
    dt_max: Annotated[float, Field(gt=0)] = 1e-4
    dealias: bool = True

    @classmethod
    def for_domain(
        cls,
        domain: DomainSpec,
        k_t: int,
        k_x: int,
        horizon: Optional[int] = None,
        modes: int = DEFAULT_MODES,
        dt_max: float = 1e-4,
        dealias: bool = True,
    ) -> "GridRequest":
        """Training levels plus the test horizon (``k_t / 4`` by default), spacing of the training grid."""
        horizon = k_t // 4 if horizon is None else horizon
        return cls(
            x_min=domain.x_min,
            x_max=domain.x_max,
            k_x=k_x,
            time_step=grid_time_step(domain.t_train_end, k_t),
            levels=k_t + horizon,
            modes=modes,
            dt_max=dt_max,
            dealias=dealias,
        )

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.k_x)

    @property
    def times(self) -> np.ndarray:
        return time_levels(self.time_step, 0, self.levels)

    def check_within(self, domain: DomainSpec) -> None:
        tol = 1e-12 * max(1.0, domain.length)
        if self.x_min < domain.x_min - tol or self.x_max > domain.x_max + tol:
            raise ArgumentError(
                f"requested x range [{self.x_min}, {self.x_max}] outside domain [{domain.x_min}, {domain.x_max}]"
            )
        if self.modes % 2:
            raise ArgumentError(f"spectral solvers need an even mode count, got {self.modes}")

    def substeps(self) -> tuple[int, float]:
        """Internal steps per output level and the internal dt, which divides the level spacing."""
        count = int(np.ceil(self.time_step / self.dt_max - 1e-12))
        return count, self.time_step / count
