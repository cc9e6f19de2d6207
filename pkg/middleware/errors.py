import logging
from contextlib import contextmanager
from typing import Iterator

logger = logging.getLogger("piml.errors")

STAGE_EXIT_CODES = {
    "config": 2,
    "solve-reference": 10,
    "train-pinn": 11,
    "infer-grid": 12,
    "train-oscillator": 13,
    "rollout": 14,
    "evaluate": 15,
    "report": 16,
    "sweep": 17,
}


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        self.exit_code = STAGE_EXIT_CODES.get(stage, 1)
        super().__init__(f"stage {stage!r} failed: {cause}")


@contextmanager
def stage_guard(stage: str, **context) -> Iterator[None]:
    """Re-raise any failure inside a stage as ``StageError`` carrying the stage name."""
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        logger.exception("Stage failed", extra={"stage": stage, **context})
        raise StageError(stage, exc) from exc
