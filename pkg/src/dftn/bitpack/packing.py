"""
Bit-plane packing of 2-bit ternary tensors.

A ternary tensor over ``{-0.5, 0, 0.5}`` is stored as two bit planes: the
sign plane (1 = positive) and the value plane (1 = nonzero). Element ``i``
lives at bit ``i % 64`` of word ``i // 64``, LSB first; zero elements carry
sign bit 0 and the tail of the last word is zero padding.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from dftn.constants import WORD_BITS
from dftn.errors import DimensionError, ParameterError, PrecisionError
from dftn.quantize.functions import phi

TERNARY_K = 2
HALF = 0.5


def word_count(bits: int) -> int:
    return (bits + WORD_BITS - 1) // WORD_BITS


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """
    Pack a boolean array along its last axis into little-endian uint64 words.

    ``[..., n]`` becomes ``[..., ceil(n / 64)]``; padding bits are zero.
    """
    bits = np.asarray(bits, dtype=bool)
    n = bits.shape[-1]
    padded = word_count(n) * WORD_BITS
    if padded != n:
        pad = [(0, 0)] * (bits.ndim - 1) + [(0, padded - n)]
        bits = np.pad(bits, pad)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8")


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of ``pack_bits``: the first ``n`` bits along the last axis"""
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, axis=-1, count=n, bitorder="little").astype(bool)


@dataclass(frozen=True)
class TernaryTensor:
    """Packed ternary tensor; immutable once built"""

    shape: Tuple[int, ...]
    sign_plane: np.ndarray
    value_plane: np.ndarray
    alpha: float
    k: int = TERNARY_K

    def __post_init__(self):
        if self.k != TERNARY_K:
            raise ParameterError(f"only 2-bit packing is supported, got k={self.k}")
        words = word_count(self.size)
        if self.sign_plane.shape != (words,) or self.value_plane.shape != (words,):
            raise DimensionError(
                f"bit planes must hold {words} words for shape {self.shape}, "
                f"got {self.sign_plane.shape} and {self.value_plane.shape}"
            )
        if self.alpha < 0:
            raise ParameterError(f"alpha must be nonnegative, got {self.alpha}")
        self.sign_plane.setflags(write=False)
        self.value_plane.setflags(write=False)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    @property
    def words(self) -> int:
        return len(self.value_plane)

    def sign_bits(self) -> np.ndarray:
        return unpack_bits(self.sign_plane, self.size).reshape(self.shape)

    def value_bits(self) -> np.ndarray:
        return unpack_bits(self.value_plane, self.size).reshape(self.shape)

    def is_canonical(self) -> bool:
        """Zero elements carry no sign bit and the padding after the last element is clear"""
        if np.any(self.sign_plane & ~self.value_plane):
            return False
        tail = self.size % WORD_BITS
        if tail == 0:
            return True
        return not self.value_plane[-1] >> np.uint64(tail)

    def storage_bytes(self) -> int:
        """Two planes plus alpha (8 bytes) plus the rank byte and u32 dims"""
        return 2 * self.words * 8 + 8 + 1 + 4 * len(self.shape)


def pack_ternary(T: np.ndarray, alpha: float = 1.0, k: int = TERNARY_K) -> TernaryTensor:
    """
    Pack ternary values into sign and value planes.

    Raises:
        PrecisionError: if any value is off the ``{-0.5, 0, 0.5}`` grid
        ParameterError: for bit-widths other than 2
    """
    if k != TERNARY_K:
        raise ParameterError(f"only 2-bit packing is supported, got k={k}")
    T = np.asarray(T)
    step = phi(k)
    if not np.all((T == 0) | (T == step) | (T == -step)):
        raise PrecisionError("tensor holds values outside {-0.5, 0, 0.5}")
    flat = T.ravel()
    return TernaryTensor(
        shape=tuple(int(d) for d in T.shape),
        sign_plane=pack_bits(flat > 0),
        value_plane=pack_bits(flat != 0),
        alpha=float(alpha),
        k=k,
    )


def unpack_ternary(t: TernaryTensor, dtype=np.float32) -> np.ndarray:
    """Ternary grid values (alpha not applied)"""
    signs = np.where(t.sign_bits(), HALF, -HALF)
    return np.where(t.value_bits(), signs, 0.0).astype(dtype)
