import logging
import os
from typing import Optional

from rich.logging import RichHandler

_EXTRA_SKIP = set(logging.LogRecord("", 0, "", 0, "", None, None).__dict__) | {"message", "asctime"}


class ContextFilter(logging.Filter):
    """Appends the ``extra={...}`` fields of a record to its message."""

    def filter(self, record: logging.LogRecord) -> bool:
        extras = {key: value for key, value in record.__dict__.items() if key not in _EXTRA_SKIP}
        if extras and not getattr(record, "_context_rendered", False):
            record.msg = f"{record.msg} " + " ".join(f"{key}={value}" for key, value in extras.items())
            record._context_rendered = True
        return True


def configure_logging(level: Optional[str] = None) -> None:
    level = (level or os.getenv("PIML_LOG_LEVEL") or "INFO").upper()
    root = logging.getLogger("piml")
    root.setLevel(level)
    if any(isinstance(handler, RichHandler) for handler in root.handlers):
        return
    handler = RichHandler(rich_tracebacks=True, show_path=False, markup=False)
    handler.addFilter(ContextFilter())
    root.addHandler(handler)
    root.propagate = False
