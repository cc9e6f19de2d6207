from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from numerics.errors import ArgumentError
from pdes.benchmarks import DomainSpec, PdeSpec


class CollocationCounts(BaseModel):
    """Point budget: ``boundary`` covers the initial line and both spatial ends."""

    residual: Annotated[int, Field(gt=0)] = 1000
    boundary: Annotated[int, Field(gt=0)] = 600
    ic_fraction: Annotated[float, Field(gt=0, lt=1)] = 0.5

    @property
    def initial(self) -> int:
        return int(round(self.boundary * self.ic_fraction))

    @property
    def per_boundary(self) -> int:
        return (self.boundary - self.initial) // 2


class CollocationSet(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    residual_x: np.ndarray
    residual_t: np.ndarray
    ic_x: np.ndarray
    # the same times are used on both spatial boundaries
    bc_t: np.ndarray

    @property
    def sizes(self) -> tuple[int, int, int]:
        return self.residual_x.size, self.ic_x.size, self.bc_t.size


def sample_collocation(spec: PdeSpec, domain: DomainSpec, counts: CollocationCounts, seed: int) -> CollocationSet:
    if counts.initial < 1 or counts.per_boundary < 1:
        raise ArgumentError(f"boundary budget {counts.boundary} too small to split")
    rng = np.random.default_rng(seed)
    residual_x = rng.uniform(domain.x_min, domain.x_max, counts.residual)
    residual_t = rng.uniform(0.0, domain.t_train_end, counts.residual)
    ic_x = rng.uniform(domain.x_min, domain.x_max, counts.initial)
    bc_t = rng.uniform(0.0, domain.t_train_end, counts.per_boundary)
    return CollocationSet(residual_x=residual_x, residual_t=residual_t, ic_x=ic_x, bc_t=bc_t)
