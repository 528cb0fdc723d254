import numpy as np
import pytest

from dftn.core import maxpool1d, maxpool1d_backward
from dftn.errors import ParameterError


def test_pairs():
    out, _ = maxpool1d(np.array([1.0, 2.0, 3.0, 4.0]), 2)
    assert out.tolist() == [2.0, 4.0]


def test_ternary_values():
    out, _ = maxpool1d(np.array([-0.5, 0.0, 0.5, 0.5]), 2)
    assert out.tolist() == [0.0, 0.5]


def test_remainder_is_truncated():
    out, _ = maxpool1d(np.array([5.0]), 2)
    assert out.shape == (0,)

    out, _ = maxpool1d(np.array([1.0, 3.0, 2.0, 9.0, 7.0]), 2)
    assert out.tolist() == [3.0, 9.0]


def test_pool_must_be_positive():
    with pytest.raises(ParameterError):
        maxpool1d(np.ones(4), 0)


def test_backward_routes_to_first_maximum():
    x = np.array([[[0.5, 0.5, 1.0, 2.0, 9.0]]])
    out, argmax = maxpool1d(x, 2)
    grad = maxpool1d_backward(np.ones_like(out), argmax, 2, x.shape[-1])
    assert grad.tolist() == [[[1.0, 0.0, 0.0, 1.0, 0.0]]]
