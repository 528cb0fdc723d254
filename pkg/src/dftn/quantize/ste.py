"""Straight-through estimator rules for the weight and activation quantizers."""

import numpy as np

from dftn.constants import STE_ACTIVATION_THRESHOLD
from dftn.core.tensor import require_same_shape


def ste_weight_grad(grad_T: np.ndarray, alpha: float) -> np.ndarray:
    """The quantizer passes gradients through scaled by alpha: ``dL/dW = alpha * dL/dT``"""
    return alpha * grad_T


def ste_activation_grad(grad_Aq: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Pass gradients where ``|A| <= 0.5`` (inclusive) and block them elsewhere"""
    require_same_shape(grad_Aq, A, "activation STE")
    return np.where(np.abs(A) <= STE_ACTIVATION_THRESHOLD, grad_Aq, 0.0).astype(
        grad_Aq.dtype, copy=False
    )
