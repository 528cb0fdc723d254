import numpy as np
import pytest

from dftn.bitpack import TernaryTensor, pack_bits, pack_ternary, unpack_bits, unpack_ternary
from dftn.errors import DimensionError, ParameterError, PrecisionError


def test_planes_of_small_vector():
    t = pack_ternary(np.array([0.5, -0.5, 0.0]))
    assert t.sign_bits().tolist() == [True, False, False]
    assert t.value_bits().tolist() == [True, True, False]
    assert t.sign_plane.tolist() == [1]
    assert t.value_plane.tolist() == [3]


def test_all_zeros():
    t = pack_ternary(np.zeros((3, 5)))
    assert not t.sign_plane.any()
    assert not t.value_plane.any()


def test_padding_to_words():
    t = pack_ternary(np.full(65, 0.5))
    assert t.words == 2
    assert t.value_plane[1] == 1
    assert t.storage_bytes() == 2 * 2 * 8 + 8 + 1 + 4


def test_roundtrip_random(rng):
    for _ in range(1000):
        shape = tuple(rng.integers(1, 7, size=rng.integers(1, 4)))
        T = rng.choice([-0.5, 0.0, 0.5], size=shape)
        np.testing.assert_array_equal(unpack_ternary(pack_ternary(T), np.float64), T)


def test_off_grid_rejected():
    with pytest.raises(PrecisionError):
        pack_ternary(np.array([0.5, 0.25]))


def test_only_two_bits():
    with pytest.raises(ParameterError):
        pack_ternary(np.array([0.5]), k=3)


def test_planes_are_read_only():
    t = pack_ternary(np.array([0.5, 0.0]))
    with pytest.raises(ValueError):
        t.value_plane[0] = 0


def test_plane_length_checked():
    with pytest.raises(DimensionError):
        TernaryTensor(
            shape=(70,),
            sign_plane=np.zeros(1, dtype=np.uint64),
            value_plane=np.zeros(1, dtype=np.uint64),
            alpha=1.0,
        )


def test_negative_alpha_rejected():
    with pytest.raises(ParameterError):
        pack_ternary(np.array([0.5]), alpha=-1.0)


def test_pack_bits_rows(rng):
    bits = rng.random((3, 100)) < 0.5
    words = pack_bits(bits)
    assert words.shape == (3, 2)
    np.testing.assert_array_equal(unpack_bits(words, 100), bits)


def test_sign_plane_is_canonical():
    values = np.array([0.5, -0.0, 0.0, -0.5] * 20)
    first = pack_ternary(values)
    second = pack_ternary(np.array([0.5, 0.0, -0.0, -0.5] * 20, dtype=np.float32))
    again = pack_ternary(unpack_ternary(first))

    for other in (second, again):
        assert other.sign_plane.tobytes() == first.sign_plane.tobytes()
        assert other.value_plane.tobytes() == first.value_plane.tobytes()
    assert first.is_canonical()


def test_non_canonical_planes_are_detected():
    t = pack_ternary(np.array([0.5, 0.0, -0.5]))
    assert t.value_plane.tolist() == [5]

    stray_sign = TernaryTensor(
        t.shape, np.array([3], dtype=np.uint64), t.value_plane.copy(), alpha=1.0
    )
    padding = TernaryTensor(
        t.shape, t.sign_plane.copy(), np.array([13], dtype=np.uint64), alpha=1.0
    )
    assert not stray_sign.is_canonical()
    assert not padding.is_canonical()
    assert pack_ternary(np.full(64, -0.5)).is_canonical()
