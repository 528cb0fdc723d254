import numpy as np
import pytest

from dftn.bitpack import (
    conv1d_packed,
    dense_packed,
    dot_packed,
    pack_bits,
    pack_ternary,
    signed_count,
    xnor_dot,
)
from dftn.core import conv1d_forward
from dftn.errors import DimensionError

GRID = np.array([-0.5, 0.0, 0.5], dtype=np.float32)


def test_dot_reference():
    a = pack_ternary(np.array([0.5, -0.5, 0.0]))
    b = pack_ternary(np.array([0.5, 0.5, -0.5]))
    assert dot_packed(a, b) == 0.0


def test_dot_with_zero_operand(rng):
    a = pack_ternary(rng.choice(GRID, size=100), alpha=2.0)
    assert dot_packed(a, pack_ternary(np.zeros(100))) == 0.0


def test_dot_matches_dense(rng):
    for _ in range(200):
        m = int(rng.integers(1, 4097))
        A = rng.choice(GRID, size=m).astype(np.float64)
        B = rng.choice(GRID, size=m).astype(np.float64)
        alpha_a, alpha_b = rng.uniform(0.1, 2.0, size=2)
        packed = dot_packed(pack_ternary(A, alpha_a), pack_ternary(B, alpha_b))
        assert packed == float(A @ B) * (alpha_a * alpha_b)


def test_dot_length_mismatch():
    with pytest.raises(DimensionError):
        dot_packed(pack_ternary(np.zeros(3)), pack_ternary(np.zeros(4)))


def test_dense_scalar():
    out = dense_packed(pack_ternary(np.array([[0.5]])), pack_ternary(np.array([[0.5]])))
    assert out.tolist() == [[0.25]]


def test_dense_orthogonal_support():
    x = pack_ternary(np.array([[0.5, 0.0, -0.5, 0.0]]))
    w = pack_ternary(np.array([[0.0], [0.5], [0.0], [-0.5]]))
    assert dense_packed(x, w).tolist() == [[0.0]]


def test_dense_matches_float32_path(rng):
    x = rng.choice(GRID, size=(17, 130))
    w = rng.choice(GRID, size=(130, 9))
    alpha = np.float32(0.37)
    expected = (x @ w) * alpha
    out = dense_packed(pack_ternary(x), pack_ternary(w, float(alpha)))
    assert out.dtype == np.float32
    np.testing.assert_array_equal(out, expected)


def test_dense_shape_mismatch():
    with pytest.raises(DimensionError):
        dense_packed(pack_ternary(np.zeros((2, 3))), pack_ternary(np.zeros((4, 1))))


def test_conv_single_tap_kernel_copies_input():
    x = np.array([[[0.5, -0.5, 0.0, 0.5]]], dtype=np.float32)
    out = conv1d_packed(pack_ternary(x), pack_ternary(np.array([[[0.5]]]), alpha=2.0))
    np.testing.assert_array_equal(out, x)


def test_conv_zero_kernel(rng):
    x = rng.choice(GRID, size=(2, 3, 10))
    out = conv1d_packed(pack_ternary(x), pack_ternary(np.zeros((4, 3, 3))))
    assert out.shape == (2, 4, 8)
    assert not out.any()


@pytest.mark.parametrize("stride", [1, 2, 3])
def test_conv_matches_dense_oracle(rng, stride):
    x = rng.choice(GRID, size=(3, 5, 40))
    k = rng.choice(GRID, size=(6, 5, 7))
    alpha = np.float32(1.3)
    expected = conv1d_forward(x, k, stride) * alpha
    out = conv1d_packed(pack_ternary(x), pack_ternary(k, float(alpha)), stride)
    np.testing.assert_array_equal(out, expected)


def test_conv_channel_mismatch():
    with pytest.raises(DimensionError):
        conv1d_packed(pack_ternary(np.zeros((1, 2, 5))), pack_ternary(np.zeros((1, 3, 2))))


def test_xnor_dot(rng):
    a = rng.random(100) < 0.5
    b = rng.random(100) < 0.5
    expected = int(np.sum(np.where(a, 1, -1) * np.where(b, 1, -1)))
    assert xnor_dot(pack_bits(a), pack_bits(b), 100) == expected


@pytest.mark.slow
def test_signed_counts_match_dense_products(rng):
    lengths = [1, 63, 64, 65, 4096] + rng.integers(1, 4097, size=95).tolist()
    for m in lengths:
        A = rng.choice(GRID, size=(1000, m)).astype(np.float64)
        B = rng.choice(GRID, size=(1000, m)).astype(np.float64)
        counts = signed_count(
            pack_bits(A > 0), pack_bits(A != 0), pack_bits(B > 0), pack_bits(B != 0)
        )
        assert counts.shape == (1000,)
        np.testing.assert_array_equal(counts * 0.25, (A * B).sum(axis=1))
