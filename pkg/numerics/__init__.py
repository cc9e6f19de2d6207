from numerics.array import Array, matmul
from numerics.errors import ArgumentError, DimensionError, NumericError, PimlError
from numerics.jet import Jet, field_derivatives, input_derivative
from numerics.tape import Tape, Var, grad

__all__ = [
    "Array",
    "ArgumentError",
    "DimensionError",
    "Jet",
    "NumericError",
    "PimlError",
    "Tape",
    "Var",
    "field_derivatives",
    "grad",
    "input_derivative",
    "matmul",
]
