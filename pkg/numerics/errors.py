from typing import Any


class PimlError(Exception):
    """Base class for every error raised by the toolkit."""


class DimensionError(PimlError, ValueError):
    pass


class ArgumentError(PimlError, ValueError):
    pass


class NumericError(PimlError, ArithmeticError):
    def __init__(self, message: str, value: Any = None, context: str | None = None):
        self.value = value
        self.context = context
        detail = message
        if context:
            detail = f"{detail} [{context}]"
        if value is not None:
            detail = f"{detail} (value={value!r})"
        super().__init__(detail)
