import time
import logging
from contextlib import contextmanager
from typing import Iterator

logger = logging.getLogger("piml.timing")


class StageTimer:
    """Wall time per pipeline stage, in seconds."""

    def __init__(self, slow_s: float = 600.0):
        self.slow_s = slow_s
        self.durations: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            duration = time.perf_counter() - start
            self.durations[name] = self.durations.get(name, 0.0) + duration
            logger.info("stage finished", extra={"stage": name, "seconds": round(duration, 3)})
            if duration >= self.slow_s:
                logger.warning("slow stage", extra={"stage": name, "seconds": round(duration, 3)})
