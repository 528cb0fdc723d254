"""
Valid (no padding) 1D convolution over the time axis.

Layout: input ``[batch, channels_in, T]``, kernel ``[channels_out,
channels_in, kh]``. Windows are gathered im2col-style and reduced with a
single matrix product.
"""

from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from dftn.errors import DimensionError, ParameterError

from .tensor import DenseTensor, require_rank


def conv_output_length(length: int, kernel: int, stride: int) -> int:
    """Number of valid positions of a kernel sliding over ``length`` samples"""
    if stride < 1:
        raise ParameterError(f"stride must be positive, got {stride}")
    if length < kernel:
        raise DimensionError(f"time length {length} is shorter than kernel {kernel}")
    return (length - kernel) // stride + 1


def _check_shapes(x: DenseTensor, kernel: DenseTensor, stride: int) -> int:
    require_rank(x, 3, "conv input")
    require_rank(kernel, 3, "conv kernel")
    if x.shape[1] != kernel.shape[1]:
        raise DimensionError(
            f"input has {x.shape[1]} channels but kernel expects {kernel.shape[1]}"
        )
    return conv_output_length(x.shape[2], kernel.shape[2], stride)


def im2col(x: DenseTensor, kh: int, stride: int) -> np.ndarray:
    """Gather windows into ``[batch * T_out, channels_in * kh]`` rows"""
    batch, channels, _ = x.shape
    windows = sliding_window_view(x, kh, axis=2)[:, :, ::stride, :]
    t_out = windows.shape[2]
    return windows.transpose(0, 2, 1, 3).reshape(batch * t_out, channels * kh)


def conv1d_forward(x: DenseTensor, kernel: DenseTensor, stride: int = 1) -> DenseTensor:
    """
    Valid convolution: ``out[b, o, t] = sum_{c,j} kernel[o, c, j] * x[b, c, t*stride + j]``.

    Args:
        x: Input ``[batch, channels_in, T]``
        kernel: Weights ``[channels_out, channels_in, kh]``
        stride: Positive step between windows

    Returns:
        ``[batch, channels_out, (T - kh) // stride + 1]``
    """
    t_out = _check_shapes(x, kernel, stride)
    batch = x.shape[0]
    channels_out, _, kh = kernel.shape
    cols = im2col(x, kh, stride)
    out = cols @ kernel.reshape(channels_out, -1).T
    return np.ascontiguousarray(out.reshape(batch, t_out, channels_out).transpose(0, 2, 1))


def conv1d_backward(
    grad_out: DenseTensor, x: DenseTensor, kernel: DenseTensor, stride: int = 1
) -> Tuple[DenseTensor, DenseTensor]:
    """Return ``(grad_input, grad_kernel)`` for :func:`conv1d_forward`"""
    t_out = _check_shapes(x, kernel, stride)
    batch, channels_in, _ = x.shape
    channels_out, _, kh = kernel.shape
    if grad_out.shape != (batch, channels_out, t_out):
        raise DimensionError(
            f"grad_out shape {grad_out.shape} does not match forward output "
            f"{(batch, channels_out, t_out)}"
        )

    g = grad_out.transpose(0, 2, 1).reshape(batch * t_out, channels_out)
    cols = im2col(x, kh, stride)
    grad_kernel = (g.T @ cols).reshape(kernel.shape)

    grad_cols = (g @ kernel.reshape(channels_out, -1)).reshape(batch, t_out, channels_in, kh)
    grad_input = np.zeros_like(x)
    span = stride * (t_out - 1) + 1
    for j in range(kh):
        grad_input[:, :, j : j + span : stride] += grad_cols[:, :, :, j].transpose(0, 2, 1)
    return grad_input, grad_kernel.astype(kernel.dtype, copy=False)
