import math

import numpy as np
import pytest

from evaluation.metrics import (
    explained_variance,
    grid_metrics,
    max_error,
    mean_absolute_error,
    metric_set,
    relative_l2,
    rmse,
)
from numerics.errors import ArgumentError, DimensionError
from schemas.grid import GridSolution


def _grid(values, n_channels=1, first_level=0, k_x=3):
    return GridSolution(
        time_step=0.1, first_level=first_level, n_channels=n_channels, xs=np.linspace(0.0, 1.0, k_x), values=np.asarray(values, dtype=float)
    )


def test_perfect_prediction():
    ref = np.array([[1.0, -2.0, 0.5], [3.0, 0.25, -1.0]])
    metrics = metric_set(ref.copy(), ref)
    assert metrics.relative_l2 == 0.0
    assert metrics.explained_variance == 1.0
    assert metrics.max_error == 0.0
    assert metrics.mean_absolute_error == 0.0
    assert metrics.rmse == 0.0


def test_reference_values():
    pred, ref = [1.0, 2.0, 4.0], [1.0, 2.0, 3.0]
    assert relative_l2(pred, ref) == pytest.approx(1.0 / math.sqrt(14.0), rel=1e-12)
    assert relative_l2(pred, ref) == pytest.approx(0.267261, abs=1e-6)
    assert explained_variance(pred, ref) == pytest.approx(0.5, rel=1e-12)
    assert max_error(pred, ref) == 1.0
    assert mean_absolute_error(pred, ref) == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert rmse(pred, ref) == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-12)


def test_zero_prediction_has_unit_relative_error():
    assert relative_l2([0.0, 0.0], [3.0, 4.0]) == pytest.approx(1.0, rel=1e-15)


def test_mean_predictor_explains_nothing():
    ref = np.array([1.0, 5.0, 2.0, 8.0])
    assert explained_variance(np.full(4, ref.mean()), ref) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("delta", [0.5, -0.25])
def test_uniform_offset(delta):
    ref = np.array([0.1, -0.7, 2.0])
    assert max_error(ref + delta, ref) == pytest.approx(abs(delta), rel=1e-12)
    assert mean_absolute_error(ref + delta, ref) == pytest.approx(abs(delta), rel=1e-12)


def test_undefined_references_rejected():
    with pytest.raises(ArgumentError):
        relative_l2([1.0, 2.0], [0.0, 0.0])
    with pytest.raises(ArgumentError):
        explained_variance([1.0, 2.0], [3.0, 3.0])


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionError):
        max_error([1.0, 2.0, 3.0], [1.0, 2.0])


def test_grid_metrics_adds_magnitude_for_complex_grids():
    ref = _grid([[3.0, 0.0, 1.0, 4.0, 1.0, 0.0], [0.0, 2.0, 1.0, 0.0, 0.0, 1.0]], n_channels=2)
    pred = _grid([[3.0, 0.0, 1.0, 4.0, 1.0, 0.0], [0.0, 2.0, 1.0, 0.0, 0.0, 0.5]], n_channels=2)
    stacked, magnitude = grid_metrics(pred, ref)
    assert stacked.max_error == pytest.approx(0.5)
    assert magnitude is not None
    assert magnitude.max_error == pytest.approx(math.sqrt(2.0) - math.sqrt(1.25), rel=1e-12)

    single = _grid([[1.0, 2.0, 3.0], [0.0, 1.0, 2.0]])
    assert grid_metrics(single, single)[1] is None


def test_grid_metrics_requires_matching_levels():
    ref = _grid([[1.0, 2.0, 3.0]], first_level=4)
    pred = _grid([[1.0, 2.0, 3.0]], first_level=5)
    with pytest.raises(ArgumentError):
        grid_metrics(pred, ref)


def test_metrics_ignore_the_order_of_paired_samples(rng):
    ref = rng.normal(size=200)
    pred = ref + 0.3 * rng.normal(size=200)
    order = rng.permutation(200)
    for metric in (relative_l2, explained_variance, max_error, mean_absolute_error, rmse):
        assert metric(pred[order], ref[order]) == pytest.approx(metric(pred, ref), rel=1e-12)


def test_explained_variance_never_exceeds_one(rng):
    for _ in range(50):
        ref = rng.normal(size=30)
        pred = ref + rng.uniform(0.0, 2.0) * rng.normal(size=30) + rng.normal()
        assert explained_variance(pred, ref) <= 1.0
