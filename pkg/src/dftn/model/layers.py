"""
Ternary conv and dense layers for training.

The forward pass ternarizes the shadow weights and computes
``alpha * op(input, T)`` in float32, in exactly the order the packed kernels
use. The backward pass returns the input gradient (alpha included) and the
straight-through weight gradient ``alpha * dL/dT``.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from dftn.core.conv import conv1d_backward, conv1d_forward
from dftn.core.dense import dense_backward, dense_forward
from dftn.core.tensor import DTYPE
from dftn.quantize.config import QuantConfig
from dftn.quantize.functions import quantize_weights
from dftn.quantize.ste import ste_weight_grad


@dataclass
class EffectiveWeights:
    """Weights actually used by a forward pass and the scale applied after the product"""

    values: np.ndarray
    alpha: float
    zero_fraction: float = 0.0


def effective_weights(W: np.ndarray, quant: QuantConfig) -> EffectiveWeights:
    """Ternary ``T`` with its alpha, or ``W`` itself with unit scale in full precision"""
    if not quant.enabled:
        return EffectiveWeights(values=W, alpha=1.0)
    result = quantize_weights(W, quant)
    return EffectiveWeights(
        values=result.ternary.astype(W.dtype, copy=False),
        alpha=result.alpha,
        zero_fraction=result.zero_fraction,
    )


def _scale(values: np.ndarray, alpha: float) -> np.ndarray:
    if alpha == 1.0:
        return values
    return values * values.dtype.type(alpha)


def ternary_conv_forward(x: np.ndarray, weights: EffectiveWeights, stride: int = 1) -> np.ndarray:
    return _scale(conv1d_forward(x, weights.values, stride), weights.alpha)


def ternary_conv_backward(
    grad_out: np.ndarray,
    x: np.ndarray,
    weights: EffectiveWeights,
    stride: int = 1,
    need_input: bool = True,
) -> Tuple[Optional[np.ndarray], np.ndarray]:
    grad_input, grad_T = conv1d_backward(grad_out, x, weights.values, stride)
    grad_W = ste_weight_grad(grad_T, weights.alpha)
    if not need_input:
        return None, grad_W
    return weights.alpha * grad_input, grad_W


def ternary_dense_forward(
    x: np.ndarray, weights: EffectiveWeights, bias: Optional[np.ndarray] = None
) -> np.ndarray:
    out = _scale(dense_forward(x, weights.values), weights.alpha)
    if bias is not None:
        out = out + bias.astype(out.dtype, copy=False)
    return out


def ternary_dense_backward(
    grad_out: np.ndarray, x: np.ndarray, weights: EffectiveWeights
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(grad_input, grad_weights, grad_bias)``"""
    grad_input, grad_T, grad_bias = dense_backward(grad_out, x, weights.values)
    return weights.alpha * grad_input, ste_weight_grad(grad_T, weights.alpha), grad_bias


def as_compute(values: np.ndarray) -> np.ndarray:
    """Cast to the training dtype unless already floating"""
    if np.issubdtype(values.dtype, np.floating):
        return values
    return values.astype(DTYPE)
