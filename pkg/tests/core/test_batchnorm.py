import numpy as np
import pytest

from dftn.core import (
    BatchNormState,
    batchnorm_backward,
    batchnorm_forward,
    batchnorm_forward_cached,
)
from dftn.errors import DimensionError, ParameterError


def test_standardized_input_passes_through(rng):
    x = rng.normal(size=(4096, 3))
    x = (x - x.mean(axis=0)) / x.std(axis=0)
    state = BatchNormState.create(3, dtype=np.float64)
    np.testing.assert_allclose(batchnorm_forward(x, state), x, atol=1e-4)


def test_affine_evaluation():
    state = BatchNormState(
        gamma=np.array([2.0]),
        beta=np.array([1.0]),
        running_mu=np.array([0.0]),
        running_sigma=np.array([2.0]),
    )
    out = batchnorm_forward(np.array([[1.0]]), state, training=False)
    assert out[0, 0] == pytest.approx(2.0)


def test_training_statistics(rng):
    state = BatchNormState.create(2, dtype=np.float64)
    state.gamma[:] = [1.5, 0.5]
    state.beta[:] = [-1.0, 2.0]
    x = rng.normal(3.0, 4.0, size=(64, 2, 20))
    out = batchnorm_forward(x, state, training=True)
    np.testing.assert_allclose(out.mean(axis=(0, 2)), state.beta, atol=1e-4)
    np.testing.assert_allclose(out.std(axis=(0, 2)), state.gamma, atol=1e-4)


def test_running_statistics_move_towards_batch(rng):
    state = BatchNormState.create(1, dtype=np.float64)
    x = rng.normal(10.0, 1.0, size=(256, 1))
    batchnorm_forward(x, state, training=True)
    assert 0.0 < state.running_mu[0] < 10.0
    eval_out = batchnorm_forward(x, state, training=False)
    assert eval_out.shape == x.shape


def test_channel_mismatch():
    with pytest.raises(DimensionError):
        batchnorm_forward(np.ones((2, 3)), BatchNormState.create(2))


def test_invalid_momentum():
    with pytest.raises(ParameterError):
        BatchNormState(np.ones(1), np.zeros(1), np.zeros(1), np.ones(1), momentum=1.0)


def test_backward_matches_finite_differences(rng):
    x = rng.normal(size=(5, 2, 3))
    g = rng.normal(size=x.shape)
    state = BatchNormState.create(2, dtype=np.float64)
    state.gamma[:] = [1.3, -0.7]

    def loss(values):
        scratch = BatchNormState.create(2, dtype=np.float64)
        scratch.gamma[:] = state.gamma
        return float(np.sum(batchnorm_forward(values, scratch, training=True) * g))

    _, cache = batchnorm_forward_cached(x, state)
    grad_x, grad_gamma, grad_beta = batchnorm_backward(g, cache, state)

    h = 1e-6
    numeric = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[idx] += h
        minus[idx] -= h
        numeric[idx] = (loss(plus) - loss(minus)) / (2 * h)
    np.testing.assert_allclose(grad_x, numeric, rtol=1e-3, atol=1e-6)
    np.testing.assert_allclose(grad_beta, g.sum(axis=(0, 2)))
    np.testing.assert_allclose(grad_gamma, (g * cache.x_hat).sum(axis=(0, 2)))
