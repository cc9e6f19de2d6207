import numpy as np
import pytest

from numerics.errors import DimensionError, NumericError
from optim.adam import AdamState, adam_step
from optim.lbfgs import LbfgsState, lbfgs_step
from optim.params import flatten, unflatten


def test_adam_zero_gradient_keeps_params():
    params = {"w": np.array([1.0, -2.0]), "b": np.array([[0.5]])}
    state = AdamState.create(params)
    updated = adam_step(state, params, {"w": np.zeros(2), "b": np.zeros((1, 1))})
    for name in params:
        np.testing.assert_array_equal(updated[name], params[name])
    assert state.step == 1


def test_adam_first_step_is_lr_sized():
    params = {"w": np.array(0.0)}
    state = AdamState.create(params, lr=0.1)
    updated = adam_step(state, params, {"w": np.array(1.0)})
    assert float(updated["w"]) == pytest.approx(-0.1, rel=1e-7)


def test_adam_converges_on_quadratic():
    params = {"w": np.array(0.0)}
    state = AdamState.create(params, lr=0.05)
    for _ in range(500):
        params = adam_step(state, params, {"w": 2.0 * (params["w"] - 3.0)})
    assert abs(float(params["w"]) - 3.0) <= 1e-2


def test_adam_rejects_bad_gradients():
    params = {"w": np.zeros(3)}
    with pytest.raises(DimensionError):
        adam_step(AdamState.create(params), params, {"w": np.zeros(2)})
    with pytest.raises(NumericError):
        adam_step(AdamState.create(params), params, {"w": np.array([0.0, np.nan, 0.0])})


def test_adam_decreases_convex_quadratic_every_step():
    a = np.diag([1.0, 4.0])
    params = {"w": np.array([2.0, -1.0])}
    state = AdamState.create(params, lr=0.01)
    loss = lambda w: 0.5 * w @ a @ w
    previous = loss(params["w"])
    for _ in range(50):
        params = adam_step(state, params, {"w": a @ params["w"]})
        current = loss(params["w"])
        assert current < previous
        previous = current


def test_flatten_and_unflatten_preserve_layout():
    params = {"W0": np.arange(6.0).reshape(2, 3), "b0": np.ones((2, 1))}
    vector = flatten(params)
    assert vector.shape == (8,)
    back = unflatten(vector * 2.0, params)
    np.testing.assert_array_equal(back["W0"], params["W0"] * 2.0)
    assert back["b0"].shape == (2, 1)


def _spd_quadratic(seed: int = 3):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    a = q @ np.diag([1.0, 2.0, 3.0, 4.0, 5.0]) @ q.T
    b = rng.normal(size=5)
    return a, b, np.linalg.solve(a, b)


def test_lbfgs_solves_spd_quadratic():
    a, b, solution = _spd_quadratic()

    def fn(w):
        # same minimizer as w'Aw/2 - b'w, evaluated without cancellation
        d = w - solution
        return 0.5 * d @ a @ d, a @ d

    state = LbfgsState()
    w = np.zeros(5)
    for _ in range(10):
        w, step = lbfgs_step(state, w, fn)
        if step == 0.0:
            break
    assert np.max(np.abs(w - solution)) <= 1e-8
    assert len(state.s) <= state.history_size


def test_lbfgs_minimizes_rosenbrock():
    def fn(w):
        x, y = w
        loss = (1.0 - x) ** 2 + 100.0 * (y - x * x) ** 2
        grad = np.array([-2.0 * (1.0 - x) - 400.0 * x * (y - x * x), 200.0 * (y - x * x)])
        return loss, grad

    state = LbfgsState()
    w = np.array([-1.2, 1.0])
    for _ in range(200):
        w, _ = lbfgs_step(state, w, fn)
    assert fn(w)[0] < 1e-6


def test_lbfgs_stored_pairs_satisfy_curvature():
    a, _, solution = _spd_quadratic(seed=11)
    state = LbfgsState(history_size=3)
    w = np.ones(5)
    for _ in range(6):
        w, _ = lbfgs_step(state, w, lambda v: (0.5 * (v - solution) @ a @ (v - solution), a @ (v - solution)))
    assert len(state.s) <= 3
    for s, y in zip(state.s, state.y):
        assert s @ y > state.curvature_eps


def test_lbfgs_zero_gradient_returns_zero_step():
    state = LbfgsState()
    start = np.array([1.0, 2.0])
    w, step = lbfgs_step(state, start, lambda v: (1.0, np.zeros(2)))
    assert step == 0.0
    np.testing.assert_array_equal(w, start)


def test_lbfgs_decreases_convex_quadratic_each_step():
    a, _, solution = _spd_quadratic(seed=5)
    fn = lambda v: (0.5 * (v - solution) @ a @ (v - solution), a @ (v - solution))
    state = LbfgsState()
    w = np.full(5, 4.0)
    previous = fn(w)[0]
    for _ in range(4):
        w, step = lbfgs_step(state, w, fn)
        current = fn(w)[0]
        assert step > 0 and current < previous
        previous = current


def test_lbfgs_non_finite_everywhere_raises():
    calls = {"n": 0}

    def fn(w):
        calls["n"] += 1
        if calls["n"] == 1:
            return 1.0, np.array([1.0])
        return float("nan"), np.array([np.nan])

    with pytest.raises(NumericError):
        lbfgs_step(LbfgsState(), np.array([0.0]), fn)


def test_lbfgs_is_deterministic():
    def run():
        a, _, solution = _spd_quadratic()
        state, w, path = LbfgsState(), np.zeros(5), []
        for _ in range(5):
            w, _ = lbfgs_step(state, w, lambda v: (0.5 * (v - solution) @ a @ (v - solution), a @ (v - solution)))
            path.append(w.copy())
        return np.array(path)

    assert np.array_equal(run(), run())


def test_lbfgs_fallback_that_raises_the_loss_is_rejected():
    # the reported gradient points uphill, so no trial point satisfies Armijo
    fn = lambda x: (float(x @ x), -2.0 * x)
    state = LbfgsState()
    x = np.array([1.0, -2.0])
    new, step = lbfgs_step(state, x, fn)
    assert step == 0.0
    np.testing.assert_array_equal(new, x)
    assert state.fallbacks == 1
    assert not state.s


def test_lbfgs_fallback_that_lowers_the_loss_is_taken():
    # an overstated gradient defeats the sufficient-decrease test at every step length
    fn = lambda x: (0.5 * float(x @ x), 1e6 * x)
    state = LbfgsState()
    x = np.array([1.0, 2.0])
    new, step = lbfgs_step(state, x, fn)
    assert step == state.fallback_step
    np.testing.assert_allclose(new, x - 1e-3 * x / np.linalg.norm(x), rtol=1e-14)
    assert state.fallbacks == 1
