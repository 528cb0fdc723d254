"""Fully connected (affine) layer: ``x @ W + b``."""

from typing import Optional, Tuple

import numpy as np

from dftn.errors import DimensionError

from .tensor import DenseTensor, require_rank


def _check(x: DenseTensor, weights: DenseTensor, bias: Optional[DenseTensor]) -> None:
    require_rank(x, 2, "dense input")
    require_rank(weights, 2, "dense weights")
    if x.shape[1] != weights.shape[0]:
        raise DimensionError(
            f"input has {x.shape[1]} features but weights expect {weights.shape[0]}"
        )
    if bias is not None and bias.shape != (weights.shape[1],):
        raise DimensionError(f"bias shape {bias.shape} does not match {weights.shape[1]} outputs")


def dense_forward(
    x: DenseTensor, weights: DenseTensor, bias: Optional[DenseTensor] = None
) -> DenseTensor:
    """
    Args:
        x: ``[batch, n_in]``
        weights: ``[n_in, n_out]``
        bias: ``[n_out]`` or None

    Returns:
        ``[batch, n_out]``
    """
    _check(x, weights, bias)
    out = x @ weights
    if bias is not None:
        out = out + bias
    return out


def dense_backward(
    grad_out: DenseTensor, x: DenseTensor, weights: DenseTensor
) -> Tuple[DenseTensor, DenseTensor, DenseTensor]:
    """Return ``(grad_input, grad_weights, grad_bias)``"""
    _check(x, weights, None)
    if grad_out.shape != (x.shape[0], weights.shape[1]):
        raise DimensionError(f"grad_out shape {grad_out.shape} does not match forward output")
    return grad_out @ weights.T, x.T @ grad_out, np.sum(grad_out, axis=0)
