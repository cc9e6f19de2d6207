import functools
import logging
from typing import Callable

import typer
from pydantic import ValidationError
from rich.console import Console

from middleware.errors import StageError
from numerics.errors import ArgumentError

logger = logging.getLogger("piml.errors")
_console = Console(stderr=True)


def stage_exception_handler(exc: StageError) -> int:
    _console.print(f"[bold red]error[/] in stage [bold]{exc.stage}[/]: {exc.cause}")
    return exc.exit_code


def validation_exception_handler(exc: Exception) -> int:
    _console.print(f"[bold red]invalid configuration[/]: {exc}")
    return 2


def unhandled_exception_handler(exc: Exception) -> int:
    logger.exception("Unhandled error", extra={"error": type(exc).__name__})
    _console.print(f"[bold red]unexpected error[/]: {exc}")
    return 1


HANDLERS: list[tuple[type[BaseException], Callable]] = [
    (StageError, stage_exception_handler),
    (ValidationError, validation_exception_handler),
    (ArgumentError, validation_exception_handler),
    (FileNotFoundError, validation_exception_handler),
    (Exception, unhandled_exception_handler),
]


def exit_code_for(exc: BaseException) -> int:
    for exc_type, handler in HANDLERS:
        if isinstance(exc, exc_type):
            return handler(exc)
    return 1


def register_exception_handlers(command: Callable) -> Callable:
    """Wrap a CLI command so failures end in the mapped exit code."""

    @functools.wraps(command)
    def wrapped(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (typer.Exit, typer.Abort):
            raise
        except Exception as exc:
            raise typer.Exit(code=exit_code_for(exc)) from exc

    return wrapped
