"""
Max-pooling over the last (time) axis.

Windows do not overlap; a trailing remainder shorter than the pool is
dropped. Ties route the gradient to the first maximal element.
"""

from typing import Tuple

import numpy as np

from dftn.errors import DimensionError, ParameterError

from .tensor import DenseTensor


def maxpool1d(x: DenseTensor, pool: int) -> Tuple[DenseTensor, np.ndarray]:
    """
    Args:
        x: Tensor whose last axis is time
        pool: Window size, also the step

    Returns:
        ``(output, argmax)`` where ``argmax`` holds the within-window offset of
        each maximum.
    """
    if pool < 1:
        raise ParameterError(f"pool size must be >= 1, got {pool}")
    t_out = x.shape[-1] // pool
    windows = x[..., : t_out * pool].reshape(*x.shape[:-1], t_out, pool)
    argmax = np.argmax(windows, axis=-1)
    out = np.take_along_axis(windows, argmax[..., None], axis=-1)[..., 0]
    return np.ascontiguousarray(out), argmax


def maxpool1d_backward(
    grad_out: DenseTensor, argmax: np.ndarray, pool: int, input_length: int
) -> DenseTensor:
    """Scatter ``grad_out`` back onto the argmax positions of the input"""
    if grad_out.shape != argmax.shape:
        raise DimensionError(
            f"grad_out shape {grad_out.shape} does not match pooled shape {argmax.shape}"
        )
    t_out = grad_out.shape[-1]
    windows = np.zeros((*grad_out.shape, pool), dtype=grad_out.dtype)
    np.put_along_axis(windows, argmax[..., None], grad_out[..., None], axis=-1)
    grad = np.zeros((*grad_out.shape[:-1], input_length), dtype=grad_out.dtype)
    grad[..., : t_out * pool] = windows.reshape(*grad_out.shape[:-1], t_out * pool)
    return grad
