import logging
from typing import Optional

import numpy as np

from numerics.array import check_finite
from numerics.errors import ArgumentError, NumericError
from oscillators.cells import readout, step
from oscillators.model import HiddenState, OscillatorModel
from schemas.grid import GridSolution

logger = logging.getLogger("piml.oscillators")


def warm_up(model: OscillatorModel, rows: np.ndarray) -> HiddenState:
    state = HiddenState.zeros(model.config.hidden)
    for row in rows:
        state = step(model, state, row)
    return state


def rollout(
    model: OscillatorModel,
    seed: GridSolution,
    horizon: int,
    *,
    warm_start: bool = True,
    first_input: Optional[np.ndarray] = None,
) -> GridSolution:
    """Extrapolate ``horizon`` levels past the end of ``seed``; each output is the next input.

    By default the last seed row is the first input, so the first emitted row
    is the level right after the seed. With ``first_input`` (the profile at
    that next level) the whole seed warms the state, ``first_input`` is
    emitted as the first row and the model produces the remaining levels.
    """
    if horizon < 1:
        raise ArgumentError(f"horizon must be at least 1, got {horizon}")
    if seed.d_in != model.config.d_in:
        raise ArgumentError(f"seed width {seed.d_in} does not match model d_in={model.config.d_in}")

    outputs: list[np.ndarray] = []
    if first_input is None:
        warm_rows = seed.values[:-1]
        u = seed.values[-1]
    else:
        u = check_finite(np.asarray(first_input, dtype=np.float64).reshape(-1), context="rollout first input")
        if u.size != seed.d_in:
            raise ArgumentError(f"first input has {u.size} values, expected {seed.d_in}")
        warm_rows = seed.values
        outputs.append(u.copy())
    state = warm_up(model, warm_rows) if warm_start else HiddenState.zeros(model.config.hidden)

    while len(outputs) < horizon:
        try:
            state = step(model, state, u)
            u = check_finite(readout(model, state), context="rollout output")
        except NumericError as exc:
            raise NumericError("non-finite rollout", value=exc.value, context=f"step {len(outputs)}; {exc.context}") from exc
        outputs.append(u)

    logger.debug("rollout done", extra={"cell": model.kind.value, "horizon": horizon, "warm_start": warm_start})
    return GridSolution(
        time_step=seed.time_step,
        first_level=seed.first_level + seed.k_t,
        n_channels=seed.n_channels,
        xs=seed.xs,
        values=np.vstack(outputs),
    )
