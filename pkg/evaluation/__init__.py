from evaluation.metrics import (
    explained_variance,
    grid_metrics,
    max_error,
    mean_absolute_error,
    metric_set,
    relative_l2,
    rmse,
)
