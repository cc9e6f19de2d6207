from typing import Literal, Optional

import numpy as np

from numerics.array import check_finite
from numerics.errors import ArgumentError
from pdes.benchmarks import DomainSpec
from pinn.mlp import MlpModel, mlp_forward
from schemas.grid import GridSolution, grid_time_step, time_levels

TimeWindow = Literal["train", "test", "full"]


def window_levels(k_t: int, time_window: TimeWindow, horizon: Optional[int] = None) -> tuple[int, int]:
    """(first level, level count) of a window; the test window continues the training levels."""
    horizon = k_t // 4 if horizon is None else horizon
    if time_window == "train":
        return 0, k_t
    if time_window == "test":
        return k_t, horizon
    if time_window == "full":
        return 0, k_t + horizon
    raise ArgumentError(f"unknown time window {time_window!r}")


def infer_grid(
    model: MlpModel,
    domain: DomainSpec,
    k_t: int,
    k_x: int,
    time_window: TimeWindow = "train",
    horizon: Optional[int] = None,
) -> GridSolution:
    """Evaluate the network on the uniform grid, one time level per row.

    ``k_t`` always fixes the spacing ``t_train_end / (k_t - 1)``.
    """
    if k_t < 2 or k_x < 2:
        raise ArgumentError(f"grid needs k_t, k_x >= 2, got {k_t}, {k_x}")
    step = grid_time_step(domain.t_train_end, k_t)
    first, count = window_levels(k_t, time_window, horizon)
    if count < 1:
        raise ArgumentError(f"empty {time_window} window")
    xs = np.linspace(domain.x_min, domain.x_max, k_x)
    times = time_levels(step, first, count)
    rows = []
    for n, t in enumerate(times):
        out = np.asarray(mlp_forward(model, xs, np.full(k_x, t)))
        rows.append(check_finite(out.reshape(-1), context=f"pinn grid row {first + n}"))
    return GridSolution(time_step=step, first_level=first, n_channels=model.n_channels, xs=xs, values=np.vstack(rows))
