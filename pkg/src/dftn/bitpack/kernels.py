"""
Popcount inner products on packed ternary operands.

For two ternary vectors the signed product count is

    pos - neg = popcount(va & vb) - 2 * popcount((sa ^ sb) & va & vb)

and the real product is that count times ``phi(2)**2 = 0.25`` times both
alphas. Packed conv and dense layers return float32 results computed as
``float32(count * 0.25) * float32(alpha_a * alpha_b)`` so they match the
dense float32 path on unpacked values bit for bit.
"""

from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from dftn.core.conv import conv_output_length
from dftn.core.tensor import DTYPE
from dftn.errors import DimensionError

from .packing import TernaryTensor, pack_bits

QUARTER = 0.25
# Bound on the [rows, cols, words] intermediate of one chunk
_CHUNK_ELEMENTS = 1 << 22


def popcount(words: np.ndarray) -> np.ndarray:
    """Per-word set-bit count"""
    return np.bitwise_count(words)


def signed_count(sa: np.ndarray, va: np.ndarray, sb: np.ndarray, vb: np.ndarray):
    """
    ``#(same sign, both nonzero) - #(opposite sign, both nonzero)`` along the last axis.

    Word vectors give an int; broadcast word matrices give an int64 count per row.
    """
    both = va & vb
    opposite = (sa ^ sb) & both
    counts = popcount(both).sum(axis=-1, dtype=np.int64) - 2 * popcount(opposite).sum(
        axis=-1, dtype=np.int64
    )
    return int(counts) if np.ndim(counts) == 0 else counts


def signed_count_matrix(
    sa: np.ndarray, va: np.ndarray, sb: np.ndarray, vb: np.ndarray
) -> np.ndarray:
    """
    All-pairs signed counts between rows of ``a`` ``[R, W]`` and rows of ``b`` ``[C, W]``.

    Returns:
        int64 array ``[R, C]``
    """
    rows, words = va.shape
    cols = vb.shape[0]
    out = np.empty((rows, cols), dtype=np.int64)
    step = max(1, _CHUNK_ELEMENTS // max(1, cols * words))
    for start in range(0, rows, step):
        stop = min(rows, start + step)
        out[start:stop] = signed_count(
            sa[start:stop, None, :], va[start:stop, None, :], sb[None, :, :], vb[None, :, :]
        )
    return out


def row_planes(
    t: TernaryTensor, rows: int, transpose: bool = False
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Re-pack a flat packed tensor as ``rows`` independently word-aligned rows.

    With ``transpose`` the tensor is read as ``[n, rows]`` and its columns become rows.
    """
    signs = t.sign_bits().reshape(-1)
    values = t.value_bits().reshape(-1)
    if transpose:
        signs = signs.reshape(-1, rows).T
        values = values.reshape(-1, rows).T
    else:
        signs = signs.reshape(rows, -1)
        values = values.reshape(rows, -1)
    return pack_bits(signs), pack_bits(values)


def _scale(counts: np.ndarray, alpha: float) -> np.ndarray:
    return (counts * QUARTER).astype(DTYPE) * DTYPE(alpha)


def dot_packed(a: TernaryTensor, b: TernaryTensor) -> float:
    """Inner product of two packed vectors, alphas applied"""
    if a.size != b.size:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    count = signed_count(a.sign_plane, a.value_plane, b.sign_plane, b.value_plane)
    return (count * QUARTER) * (a.alpha * b.alpha)


def dense_packed(inputs: TernaryTensor, weights: TernaryTensor) -> np.ndarray:
    """
    Packed ``inputs [batch, n_in] @ weights [n_in, n_out]``.

    Returns:
        float32 ``[batch, n_out]``
    """
    if len(inputs.shape) != 2 or len(weights.shape) != 2:
        raise DimensionError("dense_packed expects rank-2 operands")
    batch, n_in = inputs.shape
    if weights.shape[0] != n_in:
        raise DimensionError(f"input has {n_in} features but weights expect {weights.shape[0]}")
    n_out = weights.shape[1]
    sa, va = row_planes(inputs, batch)
    sb, vb = row_planes(weights, n_out, transpose=True)
    return _scale(signed_count_matrix(sa, va, sb, vb), inputs.alpha * weights.alpha)


def conv1d_packed(inputs: TernaryTensor, kernel: TernaryTensor, stride: int = 1) -> np.ndarray:
    """
    Packed valid 1D convolution.

    Args:
        inputs: ``[batch, C, T]`` quantized activations
        kernel: ``[C_out, C, kh]`` ternary weights

    Returns:
        float32 ``[batch, C_out, T_out]``, numerically equal to ``conv1d_forward``
        on the unpacked values times both alphas
    """
    if len(inputs.shape) != 3 or len(kernel.shape) != 3:
        raise DimensionError("conv1d_packed expects rank-3 operands")
    batch, channels, length = inputs.shape
    c_out, c_in, kh = kernel.shape
    if c_in != channels:
        raise DimensionError(f"input has {channels} channels but kernel expects {c_in}")
    t_out = conv_output_length(length, kh, stride)

    def patches(bits: np.ndarray) -> np.ndarray:
        windows = sliding_window_view(bits, kh, axis=2)[:, :, ::stride, :]
        return windows.transpose(0, 2, 1, 3).reshape(batch * t_out, channels * kh)

    sa = pack_bits(patches(inputs.sign_bits()))
    va = pack_bits(patches(inputs.value_bits()))
    sb, vb = row_planes(kernel, c_out)
    counts = signed_count_matrix(sa, va, sb, vb)
    out = _scale(counts, inputs.alpha * kernel.alpha)
    return np.ascontiguousarray(out.reshape(batch, t_out, c_out).transpose(0, 2, 1))


def xnor_dot(a_bits: np.ndarray, b_bits: np.ndarray, m: int) -> int:
    """
    Inner product of two {-1, +1} vectors packed as bits (1 = +1).

    ``m - 2 * popcount(a ^ b)``; the padding bits of both operands must be zero.
    """
    a_bits = np.asarray(a_bits, dtype=np.uint64)
    b_bits = np.asarray(b_bits, dtype=np.uint64)
    if a_bits.shape != b_bits.shape:
        raise DimensionError(f"word count mismatch: {a_bits.shape} vs {b_bits.shape}")
    return m - 2 * int(popcount(a_bits ^ b_bits).sum(dtype=np.int64))
