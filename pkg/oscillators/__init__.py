from oscillators.cells import baseline_step, cornn_step, lem_step, readout, step
from oscillators.model import HiddenState, OscillatorModel, default_learning_rate, init_oscillator
from oscillators.rollout import rollout
from oscillators.training import train_sequence, train_sequences

__all__ = [
    "HiddenState",
    "OscillatorModel",
    "baseline_step",
    "cornn_step",
    "default_learning_rate",
    "init_oscillator",
    "lem_step",
    "readout",
    "rollout",
    "step",
    "train_sequence",
    "train_sequences",
]
