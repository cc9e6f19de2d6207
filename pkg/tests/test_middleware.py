import logging

import pytest
import typer
from pydantic import BaseModel, ValidationError

from middleware.errors import StageError, stage_guard
from middleware.exception_handlers import exit_code_for, register_exception_handlers
from middleware.timing import StageTimer
from numerics.errors import ArgumentError, NumericError
from services.logging_setup import ContextFilter


class _Strict(BaseModel):
    k_t: int


def _validation_error() -> ValidationError:
    try:
        _Strict.model_validate({"k_t": "many"})
    except ValidationError as exc:
        return exc
    raise AssertionError("validation unexpectedly passed")


def test_stage_guard_wraps_failures():
    with pytest.raises(StageError) as info:
        with stage_guard("train-oscillator", cell="lem"):
            raise NumericError("loss diverged", value=float("nan"))
    assert info.value.stage == "train-oscillator"
    assert info.value.exit_code == 13
    assert isinstance(info.value.cause, NumericError)


def test_stage_guard_keeps_inner_stage():
    with pytest.raises(StageError) as info:
        with stage_guard("sweep"):
            with stage_guard("rollout"):
                raise ValueError("bad seed")
    assert info.value.stage == "rollout" and info.value.exit_code == 14


@pytest.mark.parametrize(
    "exc, code",
    [
        (StageError("solve-reference", RuntimeError("x")), 10),
        (StageError("report", RuntimeError("x")), 16),
        (ArgumentError("bad"), 2),
        (FileNotFoundError("config.yaml"), 2),
        (RuntimeError("boom"), 1),
    ],
)
def test_exit_code_for(exc, code):
    assert exit_code_for(exc) == code


def test_validation_errors_exit_as_configuration_errors():
    assert exit_code_for(_validation_error()) == 2


def test_registered_command_exits_with_stage_code():
    @register_exception_handlers
    def command():
        with stage_guard("evaluate"):
            raise ArgumentError("grids differ")

    with pytest.raises(typer.Exit) as info:
        command()
    assert info.value.exit_code == 15


def test_registered_command_passes_results_through():
    assert register_exception_handlers(lambda value: value * 2)(21) == 42


def test_stage_timer_accumulates():
    timer = StageTimer(slow_s=0.0)
    for _ in range(2):
        with timer.stage("rollout"):
            pass
    with pytest.raises(ValueError):
        with timer.stage("evaluate"):
            raise ValueError("late")
    assert set(timer.durations) == {"rollout", "evaluate"}
    assert all(seconds >= 0.0 for seconds in timer.durations.values())


def test_context_filter_renders_extras_once():
    record = logging.LogRecord("piml.test", logging.INFO, __file__, 1, "stage finished", None, None)
    record.stage = "rollout"
    context = ContextFilter()
    assert context.filter(record)
    assert context.filter(record)
    assert record.getMessage() == "stage finished stage=rollout"
