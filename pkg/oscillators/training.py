import logging
from typing import Any, Mapping, Sequence

import numpy as np

from numerics import tape as ad
from numerics.errors import ArgumentError, NumericError
from numerics.tape import Tape
from optim.adam import AdamState, adam_step
from optim.params import Params, copy_params
from oscillators.cells import sequence_drives, step_with_drives
from oscillators.model import HiddenState, OscillatorModel
from schemas.grid import GridSolution

logger = logging.getLogger("piml.oscillators")


def _check_sequences(model: OscillatorModel, sequences: Sequence[np.ndarray]) -> None:
    if not sequences:
        raise ArgumentError("no training sequences")
    for index, seq in enumerate(sequences):
        if seq.ndim != 2 or seq.shape[0] < 2:
            raise ArgumentError(f"sequence {index} needs at least two time levels, got shape {seq.shape}")
        if seq.shape[1] != model.config.d_in:
            raise ArgumentError(f"sequence {index} has width {seq.shape[1]}, model expects d_in={model.config.d_in}")


def sequence_loss(model: OscillatorModel, sequences: Sequence[np.ndarray], params: Mapping[str, Any]) -> Any:
    """Mean squared one-step-ahead error over all sequences.

    Rows ``0..k-2`` are inputs, rows ``1..k-1`` targets. The hidden state
    restarts from zero at the start of every sequence.
    """
    total = 0.0
    count = 0
    for seq in sequences:
        inputs, targets = seq[:-1], seq[1:]
        drives = sequence_drives(model, inputs, params)
        state = HiddenState.zeros(model.config.hidden)
        ys = []
        for n in range(inputs.shape[0]):
            state = step_with_drives(model, state, {name: d[n] for name, d in drives.items()}, params)
            ys.append(state.y)
        outputs = ad.stack(ys, axis=0) @ params["Q"].T
        diff = outputs - targets
        total = total + (diff * diff).sum()
        count += targets.size
    return total / float(count)


def sequence_gradient(model: OscillatorModel, sequences: Sequence[np.ndarray], params: Params | None = None) -> tuple[float, Params]:
    tape = Tape()
    leaves = tape.leaves_from(model.params if params is None else params)
    loss = sequence_loss(model, sequences, leaves)
    return float(ad.value_of(loss)), tape.gradient(loss)


def train_sequences(
    model: OscillatorModel,
    grids: Sequence[GridSolution],
    epochs: int | None = None,
    lr: float | None = None,
) -> tuple[OscillatorModel, list[float]]:
    sequences = [grid.values for grid in grids]
    _check_sequences(model, sequences)
    epochs = model.config.epochs if epochs is None else epochs
    lr = lr or model.config.lr
    if lr is None:
        raise ArgumentError("learning rate not resolved for oscillator training")

    params = copy_params(model.params)
    state = AdamState.create(params, lr=lr)
    history: list[float] = []
    for epoch in range(epochs):
        try:
            loss, grads = sequence_gradient(model, sequences, params)
        except NumericError as exc:
            raise NumericError("non-finite oscillator loss", value=exc.value, context=f"epoch {epoch}; {exc.context}") from exc
        history.append(loss)
        params = adam_step(state, params, grads)
        if epoch % model.config.log_every == 0:
            logger.info("oscillator epoch", extra={"cell": model.kind.value, "epoch": epoch, "loss": loss})
    return model.with_params(params), history


def train_sequence(model: OscillatorModel, grid: GridSolution, epochs: int | None = None, lr: float | None = None) -> tuple[OscillatorModel, list[float]]:
    return train_sequences(model, [grid], epochs=epochs, lr=lr)
