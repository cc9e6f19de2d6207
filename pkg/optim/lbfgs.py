"""Limited-memory BFGS with a strong-Wolfe line search.

One call to ``lbfgs_step`` is one outer iteration: a two-loop-recursion
direction, one accepted step, and at most one new curvature pair.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from numerics.errors import NumericError

logger = logging.getLogger("piml.optim")

LossAndGrad = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class LbfgsState:
    history_size: int = 50
    c1: float = 1e-4
    c2: float = 0.9
    max_evals: int = 25
    fallback_step: float = 1e-3
    curvature_eps: float = 1e-10
    s: deque = field(default_factory=deque)
    y: deque = field(default_factory=deque)
    x: Optional[np.ndarray] = None
    loss: Optional[float] = None
    grad: Optional[np.ndarray] = None
    iteration: int = 0
    fallbacks: int = 0

    def reset_history(self) -> None:
        self.s.clear()
        self.y.clear()


def _two_loop(state: LbfgsState, g: np.ndarray) -> np.ndarray:
    q = g.copy()
    alphas = []
    for s, y in zip(reversed(state.s), reversed(state.y)):
        rho = 1.0 / (y @ s)
        a = rho * (s @ q)
        alphas.append((a, rho, s, y))
        q -= a * y
    if state.s:
        s, y = state.s[-1], state.y[-1]
        q *= (s @ y) / (y @ y)
    for a, rho, s, y in reversed(alphas):
        b = rho * (y @ q)
        q += (a - b) * s
    return q


def _finite(value: float, grad: np.ndarray) -> bool:
    return math.isfinite(value) and bool(np.all(np.isfinite(grad)))


class _LineSearch:
    """Strong-Wolfe search along ``d`` from ``x`` (bracketing then zoom)."""

    def __init__(self, fn: LossAndGrad, x: np.ndarray, f0: float, d: np.ndarray, dphi0: float, state: LbfgsState):
        self.fn, self.x, self.f0, self.d, self.dphi0, self.state = fn, x, f0, d, dphi0, state
        self.evals = 0
        self.any_finite = False

    def _phi(self, alpha: float):
        self.evals += 1
        xa = self.x + alpha * self.d
        fa, ga = self.fn(xa)
        fa = float(fa)
        if not _finite(fa, ga):
            return xa, math.inf, ga, math.nan
        self.any_finite = True
        return xa, fa, ga, float(ga @ self.d)

    def _armijo(self, alpha: float, fa: float) -> bool:
        return fa <= self.f0 + self.state.c1 * alpha * self.dphi0

    def _curvature(self, dphia: float) -> bool:
        return abs(dphia) <= -self.state.c2 * self.dphi0

    def search(self, alpha: float):
        prev = (0.0, self.f0, self.dphi0)
        first = True
        while self.evals < self.state.max_evals:
            xa, fa, ga, dphia = self._phi(alpha)
            if not math.isfinite(fa) or not self._armijo(alpha, fa) or (not first and fa >= prev[1]):
                return self._zoom(prev, (alpha, fa, dphia))
            if self._curvature(dphia):
                return alpha, xa, fa, ga
            if dphia >= 0:
                return self._zoom((alpha, fa, dphia), prev)
            prev = (alpha, fa, dphia)
            alpha = min(2.0 * alpha, 1e8)
            first = False
        return None

    def _zoom(self, lo: tuple, hi: tuple):
        while self.evals < self.state.max_evals:
            alpha = _interpolate(lo, hi)
            xa, fa, ga, dphia = self._phi(alpha)
            if not math.isfinite(fa) or not self._armijo(alpha, fa) or fa >= lo[1]:
                hi = (alpha, fa, dphia)
                continue
            if self._curvature(dphia):
                return alpha, xa, fa, ga
            if dphia * (hi[0] - lo[0]) >= 0:
                hi = lo
            lo = (alpha, fa, dphia)
        return None


def _interpolate(lo: tuple, hi: tuple) -> float:
    a_lo, f_lo, d_lo = lo
    a_hi, f_hi, d_hi = hi
    mid = 0.5 * (a_lo + a_hi)
    if not all(math.isfinite(v) for v in (f_lo, d_lo, f_hi, d_hi)) or a_lo == a_hi:
        return mid
    d1 = d_lo + d_hi - 3.0 * (f_lo - f_hi) / (a_lo - a_hi)
    disc = d1 * d1 - d_lo * d_hi
    if disc < 0:
        return mid
    d2 = math.copysign(math.sqrt(disc), a_hi - a_lo)
    denom = d_hi - d_lo + 2.0 * d2
    if denom == 0:
        return mid
    alpha = a_hi - (a_hi - a_lo) * (d_hi + d2 - d1) / denom
    low, high = min(a_lo, a_hi), max(a_lo, a_hi)
    margin = 0.1 * (high - low)
    if not (low + margin <= alpha <= high - margin):
        return mid
    return alpha


def lbfgs_step(state: LbfgsState, params: np.ndarray, fn: LossAndGrad) -> tuple[np.ndarray, float]:
    """One outer iteration; returns the new point and the accepted step length.

    When the line search finds no acceptable point, a short steepest-descent
    step of length ``fallback_step`` is tried instead. It is kept only if it
    does not raise the loss; otherwise the iterate stays put and the step is 0.
    """
    x = np.asarray(params, dtype=np.float64)
    if state.x is not None and state.loss is not None and np.array_equal(state.x, x):
        f, g = state.loss, state.grad
    else:
        f, g = fn(x)
        f = float(f)
        if not _finite(f, g):
            raise NumericError("non-finite loss at the current iterate", value=f, context="lbfgs")
    state.iteration += 1

    if not np.any(g):
        state.x, state.loss, state.grad = x.copy(), f, g
        return x.copy(), 0.0

    d = -_two_loop(state, g)
    dphi0 = float(g @ d)
    if not dphi0 < 0:
        state.reset_history()
        d = -g
        dphi0 = float(-(g @ g))
    alpha0 = 1.0 if state.s else min(1.0, 1.0 / float(np.sum(np.abs(g))))

    search = _LineSearch(fn, x, f, d, dphi0, state)
    accepted = search.search(alpha0)
    if accepted is None:
        if not search.any_finite:
            raise NumericError("non-finite loss at every line-search trial point", value=math.inf, context="lbfgs")
        norm = float(np.linalg.norm(g))
        x_new = x - state.fallback_step * g / norm
        f_new, g_new = fn(x_new)
        f_new = float(f_new)
        if not _finite(f_new, g_new):
            raise NumericError("non-finite loss after steepest-descent fallback", value=f_new, context="lbfgs")
        state.fallbacks += 1
        if f_new > f:
            # stalled at round-off level; stay put
            logger.warning("line search failed; fallback rejected", extra={"iteration": state.iteration, "loss": f})
            state.x, state.loss, state.grad = x.copy(), f, g
            return x.copy(), 0.0
        logger.warning(
            "line search failed; steepest-descent fallback",
            extra={"iteration": state.iteration, "loss": f, "step": state.fallback_step},
        )
        step = state.fallback_step
    else:
        step, x_new, f_new, g_new = accepted

    s = x_new - x
    y = g_new - g
    if float(s @ y) > state.curvature_eps:
        state.s.append(s)
        state.y.append(y)
        while len(state.s) > state.history_size:
            state.s.popleft()
            state.y.popleft()
    else:
        logger.debug("curvature pair skipped", extra={"iteration": state.iteration, "sy": float(s @ y)})

    state.x, state.loss, state.grad = x_new.copy(), f_new, np.asarray(g_new, dtype=np.float64)
    return x_new, float(step)
