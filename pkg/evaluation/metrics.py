"""Extrapolation-accuracy metrics over paired grids or arrays."""

from typing import Any

import numpy as np

from numerics.errors import ArgumentError, DimensionError
from schemas.grid import GridSolution
from schemas.reports import MetricSet


def _pair(pred: Any, ref: Any) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(pred, GridSolution) and isinstance(ref, GridSolution):
        if not np.array_equal(pred.xs, ref.xs) or not np.array_equal(pred.times, ref.times):
            raise ArgumentError("prediction and reference grids do not share times and points")
    pred = np.asarray(pred.values if isinstance(pred, GridSolution) else pred, dtype=np.float64).ravel()
    ref = np.asarray(ref.values if isinstance(ref, GridSolution) else ref, dtype=np.float64).ravel()
    if pred.shape != ref.shape:
        raise DimensionError(f"prediction has {pred.size} entries, reference {ref.size}")
    if pred.size == 0:
        raise ArgumentError("metrics need at least one value")
    return pred, ref


def relative_l2(pred: Any, ref: Any) -> float:
    pred, ref = _pair(pred, ref)
    norm = np.linalg.norm(ref)
    if norm == 0:
        raise ArgumentError("relative L2 is undefined for a zero reference")
    return float(np.linalg.norm(pred - ref) / norm)


def explained_variance(pred: Any, ref: Any) -> float:
    pred, ref = _pair(pred, ref)
    spread = np.sum((ref - ref.mean()) ** 2)
    if spread == 0:
        raise ArgumentError("explained variance is undefined for a constant reference")
    return float(1.0 - np.sum((ref - pred) ** 2) / spread)


def max_error(pred: Any, ref: Any) -> float:
    pred, ref = _pair(pred, ref)
    return float(np.max(np.abs(pred - ref)))


def mean_absolute_error(pred: Any, ref: Any) -> float:
    pred, ref = _pair(pred, ref)
    return float(np.mean(np.abs(pred - ref)))


def rmse(pred: Any, ref: Any) -> float:
    pred, ref = _pair(pred, ref)
    return float(np.sqrt(np.mean((pred - ref) ** 2)))


def metric_set(pred: Any, ref: Any) -> MetricSet:
    return MetricSet(
        relative_l2=relative_l2(pred, ref),
        explained_variance=explained_variance(pred, ref),
        max_error=max_error(pred, ref),
        mean_absolute_error=mean_absolute_error(pred, ref),
        rmse=rmse(pred, ref),
    )


def grid_metrics(pred: GridSolution, ref: GridSolution) -> tuple[MetricSet, MetricSet | None]:
    """Stacked-channel metrics, plus |u| metrics for two-channel grids."""
    stacked = metric_set(pred, ref)
    if pred.n_channels == 1:
        return stacked, None
    return stacked, metric_set(pred.magnitude(), ref.magnitude())
