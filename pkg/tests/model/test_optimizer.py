import numpy as np
import pytest

from dftn.errors import DimensionError
from dftn.model import adadelta_step, decay_learning_rate


def test_zero_gradient_leaves_parameters(make_state):
    state = make_state()
    before = {name: value.copy() for name, value in state.params.items()}
    adadelta_step(state, {name: np.zeros_like(v) for name, v in state.params.items()})
    for name, value in state.params.items():
        np.testing.assert_array_equal(value, before[name])


def test_first_step_matches_closed_form(make_state):
    state = make_state()
    name = "out.bias"
    g = np.full_like(state.params[name], 2.0)
    start = state.params[name].copy()
    adadelta_step(state, {name: g})
    square = (1 - state.rho) * 4.0
    expected = np.sqrt(state.eps) / np.sqrt(square + state.eps) * 2.0
    np.testing.assert_allclose(start - state.params[name], expected, rtol=1e-5)
    assert np.all(state.accum_grad[name] >= 0)
    assert np.all(state.accum_update[name] >= 0)


def test_constant_gradient_keeps_moving_downhill(make_state):
    state = make_state()
    name = "out.bias"
    g = np.ones_like(state.params[name])
    steps = []
    for _ in range(50):
        before = state.params[name].copy()
        adadelta_step(state, {name: g})
        steps.append(float((before - state.params[name])[0]))
    assert all(step > 0 for step in steps)
    assert np.all(state.accum_update[name] > 0)


def test_gradient_shape_checked(make_state):
    with pytest.raises(DimensionError):
        adadelta_step(make_state(), {"out.bias": np.zeros(99)})


def test_learning_rate_decay(make_state):
    state = make_state()
    assert decay_learning_rate(state) == 1.0
    state.decay = 0.5
    assert decay_learning_rate(state) == 0.5
    assert decay_learning_rate(state) == 0.25
