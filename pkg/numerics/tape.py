"""Reverse-mode automatic differentiation over numpy arrays.

A ``Tape`` records every primitive applied to ``Var`` values in creation
order, which is already a topological order, so ``Tape.gradient`` is a single
reversed sweep. Each recorded node keeps one vector-Jacobian closure per
differentiable parent.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Sequence

import numpy as np
from scipy.special import expit

from numerics.array import as_array, broadcast_result, check_matmul_shapes, unbroadcast
from numerics.errors import ArgumentError, NumericError

logger = logging.getLogger("piml.tape")

Pullback = Callable[[np.ndarray], np.ndarray]
_SCALARS = (int, float, np.integer, np.floating, np.ndarray)


class Var:
    __array_ufunc__ = None
    __slots__ = ("value", "tape", "parents", "index")

    def __init__(self, tape: "Tape", value: np.ndarray, parents: Sequence[tuple["Var", Pullback]] = ()):
        self.tape = tape
        self.value = value
        self.parents = tuple(parents)
        self.index = tape._append(self)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def ndim(self) -> int:
        return self.value.ndim

    @property
    def size(self) -> int:
        return self.value.size

    @property
    def T(self) -> "Var":
        return transpose(self)

    def __len__(self) -> int:
        return len(self.value)

    def __repr__(self) -> str:
        return f"Var(shape={self.shape}, index={self.index})"

    def __add__(self, other):
        return add(self, other) if _accepts(other) else NotImplemented

    def __radd__(self, other):
        return add(other, self) if _accepts(other) else NotImplemented

    def __sub__(self, other):
        return subtract(self, other) if _accepts(other) else NotImplemented

    def __rsub__(self, other):
        return subtract(other, self) if _accepts(other) else NotImplemented

    def __mul__(self, other):
        return multiply(self, other) if _accepts(other) else NotImplemented

    def __rmul__(self, other):
        return multiply(other, self) if _accepts(other) else NotImplemented

    def __truediv__(self, other):
        return divide(self, other) if _accepts(other) else NotImplemented

    def __rtruediv__(self, other):
        return divide(other, self) if _accepts(other) else NotImplemented

    def __matmul__(self, other):
        return matmul(self, other) if _accepts(other) else NotImplemented

    def __rmatmul__(self, other):
        return matmul(other, self) if _accepts(other) else NotImplemented

    def __neg__(self):
        return negative(self)

    def __pow__(self, exponent):
        return power(self, exponent)

    def __getitem__(self, index):
        return take(self, index)

    def tanh(self) -> "Var":
        return tanh(self)

    def sigmoid(self) -> "Var":
        return sigmoid(self)

    def sum(self, axis: int | None = None) -> "Var":
        return reduce_sum(self, axis)

    def mean(self, axis: int | None = None) -> "Var":
        return reduce_mean(self, axis)

    def reshape(self, *shape) -> "Var":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return reshape(self, shape)


class Tape:
    def __init__(self) -> None:
        self._nodes: list[Var] = []
        self._leaves: dict[str, Var] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    def _append(self, node: Var) -> int:
        self._nodes.append(node)
        return len(self._nodes) - 1

    @property
    def leaves(self) -> dict[str, Var]:
        return dict(self._leaves)

    def leaf(self, name: str, value: Any) -> Var:
        if name in self._leaves:
            raise ArgumentError(f"leaf {name!r} already registered")
        var = Var(self, as_array(value, copy=True))
        self._leaves[name] = var
        return var

    def leaves_from(self, params: dict[str, np.ndarray]) -> dict[str, Var]:
        return {name: self.leaf(name, value) for name, value in params.items()}

    def gradient(self, loss: Var) -> dict[str, np.ndarray]:
        if not isinstance(loss, Var) or loss.tape is not self:
            raise ArgumentError("loss was not recorded on this tape")
        if loss.size != 1:
            raise ArgumentError(f"loss must be a scalar, got shape {loss.shape}")
        if not np.all(np.isfinite(loss.value)):
            raise NumericError("non-finite loss", value=float(loss.value.reshape(())), context="tape.gradient")
        if not self._nodes:
            raise ArgumentError("empty tape")

        adjoints: list[np.ndarray | None] = [None] * (loss.index + 1)
        adjoints[loss.index] = np.ones_like(loss.value)
        for node in reversed(self._nodes[: loss.index + 1]):
            upstream = adjoints[node.index]
            if upstream is None:
                continue
            for parent, pullback in node.parents:
                contribution = pullback(upstream)
                current = adjoints[parent.index]
                adjoints[parent.index] = contribution if current is None else current + contribution

        grads = {}
        for name, leaf in self._leaves.items():
            adj = adjoints[leaf.index] if leaf.index <= loss.index else None
            grads[name] = np.zeros_like(leaf.value) if adj is None else np.ascontiguousarray(adj)
        return grads


def grad(loss: Var) -> dict[str, np.ndarray]:
    return loss.tape.gradient(loss)


def value_of(x: Any) -> np.ndarray:
    return x.value if isinstance(x, Var) else np.asarray(x, dtype=np.float64)


def _accepts(other: Any) -> bool:
    return isinstance(other, (Var,) + _SCALARS)


def _tape_of(*operands: Any) -> Tape:
    tapes = {id(op.tape): op.tape for op in operands if isinstance(op, Var)}
    if len(tapes) != 1:
        raise ArgumentError("operands belong to different tapes")
    return next(iter(tapes.values()))


def _edges(*pairs: tuple[Any, Pullback]) -> list[tuple[Var, Pullback]]:
    return [(operand, pullback) for operand, pullback in pairs if isinstance(operand, Var)]


def add(a: Any, b: Any) -> Var:
    av, bv = value_of(a), value_of(b)
    broadcast_result(av.shape, bv.shape)
    return Var(_tape_of(a, b), av + bv, _edges(
        (a, lambda g: unbroadcast(g, av.shape)),
        (b, lambda g: unbroadcast(g, bv.shape)),
    ))


def subtract(a: Any, b: Any) -> Var:
    av, bv = value_of(a), value_of(b)
    broadcast_result(av.shape, bv.shape)
    return Var(_tape_of(a, b), av - bv, _edges(
        (a, lambda g: unbroadcast(g, av.shape)),
        (b, lambda g: unbroadcast(-g, bv.shape)),
    ))


def multiply(a: Any, b: Any) -> Var:
    av, bv = value_of(a), value_of(b)
    broadcast_result(av.shape, bv.shape)
    return Var(_tape_of(a, b), av * bv, _edges(
        (a, lambda g: unbroadcast(g * bv, av.shape)),
        (b, lambda g: unbroadcast(g * av, bv.shape)),
    ))


def divide(a: Any, b: Any) -> Var:
    av, bv = value_of(a), value_of(b)
    broadcast_result(av.shape, bv.shape)
    out = av / bv
    return Var(_tape_of(a, b), out, _edges(
        (a, lambda g: unbroadcast(g / bv, av.shape)),
        (b, lambda g: unbroadcast(-g * out / bv, bv.shape)),
    ))


def negative(a: Var) -> Var:
    return Var(a.tape, -a.value, [(a, lambda g: -g)])


def power(a: Var, exponent: int | float) -> Var:
    v = a.value
    if exponent == 1:
        return a
    return Var(a.tape, v**exponent, [(a, lambda g: g * exponent * v ** (exponent - 1))])


def matmul(a: Any, b: Any) -> Var:
    av, bv = value_of(a), value_of(b)
    check_matmul_shapes(av.shape, bv.shape)

    def pull_a(g: np.ndarray) -> np.ndarray:
        return np.outer(g, bv) if bv.ndim == 1 else g @ bv.T

    return Var(_tape_of(a, b), av @ bv, _edges((a, pull_a), (b, lambda g: av.T @ g)))


def tanh(a: Any) -> Any:
    if not isinstance(a, Var):
        return np.tanh(a)
    out = np.tanh(a.value)
    return Var(a.tape, out, [(a, lambda g: g * (1.0 - out * out))])


def sigmoid(a: Any) -> Any:
    if not isinstance(a, Var):
        return expit(a)
    out = expit(a.value)
    return Var(a.tape, out, [(a, lambda g: g * out * (1.0 - out))])


def reduce_sum(a: Var, axis: int | None = None) -> Var:
    shape = a.shape
    if axis is None:
        return Var(a.tape, np.asarray(a.value.sum()), [(a, lambda g: np.full(shape, float(g)))])
    return Var(a.tape, a.value.sum(axis=axis), [
        (a, lambda g: np.broadcast_to(np.expand_dims(g, axis), shape).copy()),
    ])


def reduce_mean(a: Var, axis: int | None = None) -> Var:
    count = a.size if axis is None else a.shape[axis]
    return reduce_sum(a, axis) / float(count)


def take(a: Var, index: Any) -> Var:
    shape = a.shape

    def pull(g: np.ndarray) -> np.ndarray:
        full = np.zeros(shape)
        np.add.at(full, index, g)
        return full

    return Var(a.tape, np.array(a.value[index]), [(a, pull)])


def reshape(a: Var, shape: tuple[int, ...]) -> Var:
    original = a.shape
    return Var(a.tape, a.value.reshape(shape), [(a, lambda g: g.reshape(original))])


def transpose(a: Var) -> Var:
    return Var(a.tape, a.value.T.copy(), [(a, lambda g: g.T)])


def stack(items: Sequence[Any], axis: int = 0) -> Any:
    if not any(isinstance(item, Var) for item in items):
        return np.stack([np.asarray(item, dtype=np.float64) for item in items], axis=axis)
    values = [value_of(item) for item in items]
    tape = _tape_of(*items)
    return Var(tape, np.stack(values, axis=axis), _edges(*(
        (item, lambda g, i=i: np.take(g, i, axis=axis)) for i, item in enumerate(items)
    )))
