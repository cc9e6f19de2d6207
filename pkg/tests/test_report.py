import numpy as np
import pandas as pd
import pytest

from models.run_record import RunRecord
from numerics.errors import ArgumentError
from services.pipeline import run_experiment
from services.report import records_frame, summarize, write_report


def _record(run_id: str, seed: int, relative_l2: float, cell: str = "lem") -> RunRecord:
    return RunRecord(
        run_id=run_id,
        benchmark="burgers",
        cell=cell,
        seed=seed,
        run_dir="runs/" + run_id,
        code_version="test",
        config_json="{}",
        artifacts_json="{}",
        stage_seconds_json="{}",
        relative_l2=relative_l2,
        explained_variance=0.9,
        max_error=0.1,
        mean_absolute_error=0.05,
        rmse=0.07,
    )


def test_summary_over_seeds():
    records = [_record("a", 0, 0.1), _record("b", 1, 0.3), _record("c", 0, 0.2, cell="gru")]
    summary = summarize(records_frame(records))
    lem = summary[summary["cell"] == "lem"].iloc[0]
    assert lem["relative_l2_mean"] == pytest.approx(0.2)
    assert lem["relative_l2_std"] == pytest.approx(np.std([0.1, 0.3], ddof=1))
    assert lem["replicates"] == 2
    gru = summary[summary["cell"] == "gru"].iloc[0]
    assert np.isnan(gru["relative_l2_std"])


def test_empty_report_rejected(tmp_path):
    with pytest.raises(ArgumentError):
        write_report([], tmp_path)


def test_report_for_a_finished_run(tiny_config, tmp_path):
    record = run_experiment(tiny_config)
    written = write_report([record], tmp_path / "report")
    names = {path.name for path in written}
    assert {"metrics.csv", "summary.csv", f"{record.run_id}-heatmap.svg", f"{record.run_id}-snapshots.svg"} <= names
    assert all(path.exists() for path in written)
    assert (tmp_path / "report" / f"{record.run_id}-heatmap.svg").read_text().lstrip().startswith("<?xml")
    metrics = pd.read_csv(tmp_path / "report" / "metrics.csv", float_precision="round_trip")
    assert metrics["relative_l2"].iloc[0] == record.relative_l2


def test_report_with_missing_grids(tmp_path):
    with pytest.raises(FileNotFoundError):
        write_report([_record("gone", 0, 0.1)], tmp_path)
