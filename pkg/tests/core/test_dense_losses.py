import math

import numpy as np
import pytest

from dftn.core import dense_backward, dense_forward, softmax, softmax_cross_entropy
from dftn.errors import DimensionError, ParameterError


def test_identity_weights():
    x = np.array([[1.0, -2.0, 3.0]])
    np.testing.assert_array_equal(dense_forward(x, np.eye(3), np.zeros(3)), x)


def test_scalar_case():
    assert dense_forward(np.array([[3.0]]), np.array([[2.0]]), np.array([1.0]))[0, 0] == 7.0


def test_dense_shape_mismatch():
    with pytest.raises(DimensionError):
        dense_forward(np.ones((2, 3)), np.ones((4, 2)))
    with pytest.raises(DimensionError):
        dense_forward(np.ones((2, 3)), np.ones((3, 2)), np.ones(3))


def test_dense_backward_matches_finite_differences(rng):
    x = rng.normal(size=(4, 5))
    w = rng.normal(size=(5, 3))
    g = rng.normal(size=(4, 3))
    gx, gw, gb = dense_backward(g, x, w)

    h = 1e-6
    numeric_w = np.zeros_like(w)
    for idx in np.ndindex(w.shape):
        plus, minus = w.copy(), w.copy()
        plus[idx] += h
        minus[idx] -= h
        numeric_w[idx] = (np.sum((x @ plus) * g) - np.sum((x @ minus) * g)) / (2 * h)
    np.testing.assert_allclose(gw, numeric_w, rtol=1e-3)
    np.testing.assert_allclose(gx, g @ w.T)
    np.testing.assert_allclose(gb, g.sum(axis=0))


def test_uniform_logits():
    loss, _ = softmax_cross_entropy(np.zeros((1, 4)), np.array([2]))
    assert loss == pytest.approx(math.log(4))
    np.testing.assert_allclose(softmax(np.zeros((1, 4))), 0.25)


def test_large_logits_do_not_overflow():
    probs = softmax(np.array([[1000.0, 0.0]]))
    assert np.all(np.isfinite(probs))
    np.testing.assert_allclose(probs, [[1.0, 0.0]], atol=1e-12)
    loss, grad = softmax_cross_entropy(np.array([[1000.0, 0.0]]), np.array([0]))
    assert loss == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.isfinite(grad))


def test_cross_entropy_gradient(rng):
    logits = rng.normal(size=(3, 4))
    labels = np.array([0, 3, 1])
    _, grad = softmax_cross_entropy(logits, labels)

    h = 1e-6
    numeric = np.zeros_like(logits)
    for idx in np.ndindex(logits.shape):
        plus, minus = logits.copy(), logits.copy()
        plus[idx] += h
        minus[idx] -= h
        numeric[idx] = (
            softmax_cross_entropy(plus, labels)[0] - softmax_cross_entropy(minus, labels)[0]
        ) / (2 * h)
    np.testing.assert_allclose(grad, numeric, rtol=1e-3, atol=1e-8)


def test_label_validation():
    with pytest.raises(ParameterError):
        softmax_cross_entropy(np.zeros((1, 2)), np.array([2]))
    with pytest.raises(DimensionError):
        softmax_cross_entropy(np.zeros((2, 2)), np.array([0]))
