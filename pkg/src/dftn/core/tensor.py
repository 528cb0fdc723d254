"""
Dense tensor conventions shared by every numeric module.

A ``DenseTensor`` is a plain row-major ``numpy.ndarray``. Training runs in
32-bit floats; operations preserve the dtype of their inputs so gradient
checks can run in float64.
"""

from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from dftn.errors import DimensionError

DenseTensor = NDArray[np.floating]

DTYPE = np.float32


def as_dense(values, dtype=DTYPE) -> DenseTensor:
    """Return ``values`` as a contiguous floating array"""
    array = np.asarray(values)
    if not np.issubdtype(array.dtype, np.floating):
        array = array.astype(dtype)
    return np.ascontiguousarray(array)


def require_rank(tensor: np.ndarray, rank: int, name: str) -> None:
    if tensor.ndim != rank:
        raise DimensionError(f"{name} must have rank {rank}, got shape {tensor.shape}")


def require_same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{what}: shape {a.shape} does not match {b.shape}")


def check_finite(tensor: np.ndarray, name: str) -> None:
    """Raise if a tensor holds NaN or Inf"""
    if not np.all(np.isfinite(tensor)):
        raise DimensionError(f"{name} contains non-finite values")


def shape_size(shape: Sequence[int]) -> int:
    return int(np.prod(shape, dtype=np.int64))
