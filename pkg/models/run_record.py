import json
from datetime import datetime
from typing import Annotated, Any, Optional

from sqlmodel import Field, SQLModel


class RunRecord(SQLModel, table=True):
    """One finished end-to-end run; rows are only ever appended."""

    __tablename__ = "run_records"

    id: Annotated[Optional[int], Field(default=None, primary_key=True)]
    run_id: Annotated[str, Field(index=True, max_length=64)]
    sweep_id: Annotated[Optional[str], Field(default=None, index=True, max_length=64)]
    benchmark: Annotated[str, Field(index=True, max_length=64)]
    cell: Annotated[str, Field(max_length=16)]
    seed: int
    run_dir: str
    code_version: Annotated[str, Field(max_length=32)]
    config_json: str
    sweep_point_json: Annotated[str, Field(default="{}")]
    artifacts_json: str
    stage_seconds_json: str

    relative_l2: float
    explained_variance: float
    max_error: float
    mean_absolute_error: float
    rmse: float
    magnitude_json: Annotated[Optional[str], Field(default=None)]
    training_window_json: Annotated[Optional[str], Field(default=None)]
    pinn_relative_l2: Annotated[Optional[float], Field(default=None)]

    created_at: Annotated[datetime, Field(default_factory=datetime.utcnow, nullable=False)]

    def artifacts(self) -> dict[str, str]:
        return json.loads(self.artifacts_json)

    def sweep_point(self) -> dict[str, Any]:
        return json.loads(self.sweep_point_json)

    def metrics(self) -> dict[str, float]:
        return {
            "relative_l2": self.relative_l2,
            "explained_variance": self.explained_variance,
            "max_error": self.max_error,
            "mean_absolute_error": self.mean_absolute_error,
            "rmse": self.rmse,
        }
