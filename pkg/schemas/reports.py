from typing import Optional

from pydantic import BaseModel


class PinnLossReport(BaseModel):
    epoch: int = 0
    total: float
    residual_term: float
    ic_term: float
    bc_term: float


class MetricSet(BaseModel):
    relative_l2: float
    explained_variance: float
    max_error: float
    mean_absolute_error: float
    rmse: float


class MetricsRecord(BaseModel):
    benchmark: str
    cell: str
    seed: int
    window: str = "test"
    stacked: MetricSet
    magnitude: Optional[MetricSet] = None
