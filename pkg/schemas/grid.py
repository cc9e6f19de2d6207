from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from numerics.errors import ArgumentError, DimensionError, NumericError

# spectral modes of a reference solve; 2/3-rule dealiasing keeps a third of them
DEFAULT_MODES = 2048


def time_levels(time_step: float, first_level: int, count: int) -> np.ndarray:
    """Times of ``count`` uniform levels starting at integer level ``first_level``.

    Every grid in the pipeline derives its times here, so levels shared by two
    grids are bit-identical.
    """
    return np.arange(first_level, first_level + count, dtype=np.float64) * time_step


def grid_time_step(t_train_end: float, k_t: int) -> float:
    if k_t < 2:
        raise ArgumentError(f"k_t must be at least 2, got {k_t}")
    return t_train_end / (k_t - 1)


class GridSolution(BaseModel):
    """Solution values on a uniform space-time grid.

    ``values`` is ``k_t x (n_channels * k_x)``; row ``n`` holds the full spatial
    profile at time level ``n``, channel-major.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    time_step: Annotated[float, Field(gt=0)]
    first_level: Annotated[int, Field(ge=0)] = 0
    n_channels: Annotated[int, Field(ge=1, le=2)] = 1
    xs: np.ndarray
    values: np.ndarray

    @model_validator(mode="after")
    def _check(self):
        if self.xs.ndim != 1 or self.xs.size < 2:
            raise DimensionError("xs must be a 1-D array with at least two points")
        if np.any(np.diff(self.xs) <= 0):
            raise ArgumentError("xs must be strictly increasing")
        if self.values.ndim != 2 or self.values.shape[1] != self.n_channels * self.xs.size:
            raise DimensionError(
                f"values shape {self.values.shape} does not match {self.n_channels} channel(s) x {self.xs.size} points"
            )
        if self.values.shape[0] < 1:
            raise DimensionError("grid has no time levels")
        if not np.all(np.isfinite(self.values)):
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise NumericError("non-finite grid value", value=float(self.values[tuple(bad)]), context=f"grid index {tuple(int(i) for i in bad)}")
        return self

    @property
    def k_t(self) -> int:
        return self.values.shape[0]

    @property
    def k_x(self) -> int:
        return self.xs.size

    @property
    def d_in(self) -> int:
        return self.values.shape[1]

    @property
    def times(self) -> np.ndarray:
        return time_levels(self.time_step, self.first_level, self.k_t)

    def channel(self, index: int) -> np.ndarray:
        if not 0 <= index < self.n_channels:
            raise ArgumentError(f"channel {index} out of range for {self.n_channels} channel(s)")
        return self.values[:, index * self.k_x : (index + 1) * self.k_x]

    def magnitude(self) -> "GridSolution":
        """|u| for a two-channel (real, imaginary) grid; a copy of the grid otherwise."""
        if self.n_channels == 1:
            return self.model_copy()
        mag = np.hypot(self.channel(0), self.channel(1))
        return self.model_copy(update={"values": mag, "n_channels": 1})

    def rows(self, start: int, stop: int | None = None) -> "GridSolution":
        stop = self.k_t if stop is None else stop
        if not 0 <= start < stop <= self.k_t:
            raise ArgumentError(f"row window [{start}, {stop}) outside 0..{self.k_t}")
        return self.model_copy(update={"values": self.values[start:stop].copy(), "first_level": self.first_level + start})

    def level_index(self, t: float) -> int:
        """Row closest to time ``t``."""
        return int(np.argmin(np.abs(self.times - t)))
