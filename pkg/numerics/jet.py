"""Truncated Taylor (jet) arithmetic in two input directions, x and t.

A ``Jet`` holds normalized Taylor coefficients ``c[i, j] = d^(i+j) f / dx^i dt^j / (i! j!)``
for every ``i <= order_x`` and ``j <= order_t``; absent keys are exact zeros.
Products are truncated to that box, which is exact arithmetic in the quotient
ring modulo ``x^(order_x+1)`` and ``t^(order_t+1)``. Coefficients may be plain
arrays or tape ``Var``s, so a jet evaluated on a network stays differentiable
with respect to the network parameters.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping

import numpy as np
from numpy.polynomial import polynomial as P

from numerics import tape as ad
from numerics.errors import ArgumentError, DimensionError

Index = tuple[int, int]

MAX_ORDER_X = 4
MAX_ORDER_T = 2
MAX_TOTAL_ORDER = 4


class Jet:
    __array_ufunc__ = None
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Mapping[Index, Any], order: Index):
        self.order = order
        self.coeffs = {key: value for key, value in coeffs.items() if key[0] <= order[0] and key[1] <= order[1]}

    @classmethod
    def variable(cls, value: Any, direction: str, order: Index) -> "Jet":
        value = np.asarray(value, dtype=np.float64)
        coeffs: dict[Index, Any] = {(0, 0): value}
        seed = {"x": (1, 0), "t": (0, 1)}[direction]
        if seed[0] <= order[0] and seed[1] <= order[1]:
            coeffs[seed] = np.ones_like(value)
        return cls(coeffs, order)

    @classmethod
    def constant(cls, value: Any, order: Index) -> "Jet":
        return cls({(0, 0): value}, order)

    @staticmethod
    def stack(jets: Iterable["Jet"]) -> "Jet":
        jets = list(jets)
        order = _common_order(*jets)
        keys = sorted({key for jet in jets for key in jet.coeffs})
        coeffs = {}
        for key in keys:
            rows = [jet.coeffs.get(key) for jet in jets]
            template = np.zeros_like(ad.value_of(jets[0].value))
            coeffs[key] = ad.stack([template if row is None else row for row in rows], axis=0)
        return Jet(coeffs, order)

    @property
    def value(self) -> Any:
        return self.coeffs[(0, 0)]

    @property
    def shape(self) -> tuple[int, ...]:
        return ad.value_of(self.value).shape

    def coefficient(self, i: int, j: int) -> Any:
        if (i, j) in self.coeffs:
            return self.coeffs[(i, j)]
        return np.zeros_like(ad.value_of(self.value))

    def derivative(self, i: int, j: int) -> Any:
        if i > self.order[0] or j > self.order[1]:
            raise ArgumentError(f"derivative ({i}, {j}) exceeds jet order {self.order}")
        return self.coefficient(i, j) * float(math.factorial(i) * math.factorial(j))

    def _lift(self, other: Any) -> "Jet":
        if isinstance(other, Jet):
            _common_order(self, other)
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        other = self._lift(other)
        coeffs = dict(self.coeffs)
        for key, value in other.coeffs.items():
            coeffs[key] = coeffs[key] + value if key in coeffs else value
        return Jet(coeffs, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet({key: -value for key, value in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet({key: value * other for key, value in self.coeffs.items()}, self.order)
        _common_order(self, other)
        coeffs: dict[Index, Any] = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                if key[0] > self.order[0] or key[1] > self.order[1]:
                    continue
                term = a * b
                coeffs[key] = coeffs[key] + term if key in coeffs else term
        return Jet(coeffs, self.order)

    def __rmul__(self, other):
        return Jet({key: other * value for key, value in self.coeffs.items()}, self.order)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            raise ArgumentError("division by a jet is not supported")
        return Jet({key: value / other for key, value in self.coeffs.items()}, self.order)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 1:
            raise ArgumentError(f"jets support positive integer powers only, got {exponent!r}")
        result = self
        for _ in range(exponent - 1):
            result = result * self
        return result

    def __matmul__(self, other):
        return Jet({key: value @ other for key, value in self.coeffs.items()}, self.order)

    def __rmatmul__(self, other):
        return Jet({key: other @ value for key, value in self.coeffs.items()}, self.order)

    def __getitem__(self, index):
        return Jet({key: value[index] for key, value in self.coeffs.items()}, self.order)

    def _compose(self, derivatives: list[Any]) -> "Jet":
        """Apply a scalar function given its derivatives at the constant term."""
        nilpotent = Jet({key: value for key, value in self.coeffs.items() if key != (0, 0)}, self.order)
        result = Jet.constant(derivatives[0], self.order)
        power = None
        for k in range(1, len(derivatives)):
            power = nilpotent if power is None else power * nilpotent
            if not power.coeffs:
                break
            result = result + power * (derivatives[k] / float(math.factorial(k)))
        return result

    def _max_degree(self) -> int:
        return self.order[0] + self.order[1]

    def tanh(self) -> "Jet":
        base = ad.tanh(self.value)
        return self._compose([_horner(poly, base) for poly in _tanh_polynomials(self._max_degree())])

    def sigmoid(self) -> "Jet":
        base = ad.sigmoid(self.value)
        return self._compose([_horner(poly, base) for poly in _sigmoid_polynomials(self._max_degree())])

    def sin(self) -> "Jet":
        a0 = _plain(self.value, "sin")
        return self._compose([np.sin(a0 + k * np.pi / 2) for k in range(self._max_degree() + 1)])

    def cos(self) -> "Jet":
        a0 = _plain(self.value, "cos")
        return self._compose([np.cos(a0 + k * np.pi / 2) for k in range(self._max_degree() + 1)])

    def exp(self) -> "Jet":
        a0 = _plain(self.value, "exp")
        e = np.exp(a0)
        return self._compose([e] * (self._max_degree() + 1))


def _plain(value: Any, name: str) -> np.ndarray:
    if isinstance(value, ad.Var):
        raise TypeError(f"{name} is not registered on the tape; only tanh and sigmoid are")
    return np.asarray(value, dtype=np.float64)


def _common_order(*jets: Jet) -> Index:
    orders = {jet.order for jet in jets}
    if len(orders) != 1:
        raise DimensionError(f"jets of different orders cannot be combined: {sorted(orders)}")
    return orders.pop()


def _horner(coefficients: tuple[float, ...], base: Any) -> Any:
    result = coefficients[-1]
    for c in reversed(coefficients[:-1]):
        result = result * base + c
    return result


@lru_cache(maxsize=None)
def _tanh_polynomials(degree: int) -> tuple[tuple[float, ...], ...]:
    # d/dx p(T) = p'(T) (1 - T^2)
    polys = [np.array([0.0, 1.0])]
    for _ in range(degree):
        polys.append(P.polymul(P.polyder(polys[-1]), [1.0, 0.0, -1.0]))
    return tuple(tuple(float(c) for c in poly) for poly in polys)


@lru_cache(maxsize=None)
def _sigmoid_polynomials(degree: int) -> tuple[tuple[float, ...], ...]:
    # d/dx p(S) = p'(S) (S - S^2)
    polys = [np.array([0.0, 1.0])]
    for _ in range(degree):
        polys.append(P.polymul(P.polyder(polys[-1]), [0.0, 1.0, -1.0]))
    return tuple(tuple(float(c) for c in poly) for poly in polys)


def validate_orders(order_x: int, order_t: int) -> None:
    if not (0 <= order_x <= MAX_ORDER_X and 0 <= order_t <= MAX_ORDER_T):
        raise ArgumentError(f"unsupported derivative order (x={order_x}, t={order_t})")
    if order_x + order_t > MAX_TOTAL_ORDER:
        raise ArgumentError(f"mixed derivative order {order_x + order_t} exceeds {MAX_TOTAL_ORDER}")


FieldFn = Callable[[Jet, Jet], Any]


def input_derivative(f: FieldFn, x: Any, t: Any, order_x: int, order_t: int) -> Any:
    """Exact derivative ``d^(order_x + order_t) f / dx^order_x dt^order_t`` at (x, t)."""
    validate_orders(order_x, order_t)
    order = (order_x, order_t)
    out = f(Jet.variable(x, "x", order), Jet.variable(t, "t", order))
    if not isinstance(out, Jet):
        return out if order == (0, 0) else np.zeros_like(np.asarray(out, dtype=np.float64))
    result = out.derivative(order_x, order_t)
    return float(result) if np.ndim(result) == 0 else result


def _jet_boxes(orders: Iterable[Index]) -> list[Index]:
    pure_x = max((i for i, j in orders if j == 0), default=0)
    pure_t = max((j for i, j in orders if i == 0), default=0)
    mixed = [(i, j) for i, j in orders if i > 0 and j > 0]
    boxes = [(pure_x, 0)]
    if pure_t:
        boxes.append((0, pure_t))
    if mixed:
        boxes.append((max(i for i, _ in mixed), max(j for _, j in mixed)))
    return boxes


def field_derivatives(f: FieldFn, x: Any, t: Any, orders: Iterable[Index]) -> dict[Index, Any]:
    # pure-x orders share one jet pass, pure-t orders another, mixed orders a third
    orders = sorted(set(orders) | {(0, 0)})
    for i, j in orders:
        validate_orders(i, j)
    result: dict[Index, Any] = {}
    for box in _jet_boxes(orders):
        out = f(Jet.variable(x, "x", box), Jet.variable(t, "t", box))
        if not isinstance(out, Jet):
            out = Jet.constant(out, box)
        for i, j in orders:
            if (i, j) not in result and i <= box[0] and j <= box[1]:
                result[(i, j)] = out.derivative(i, j)
    return result
