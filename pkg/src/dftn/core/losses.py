"""Softmax and mean softmax cross-entropy."""

from typing import Tuple

import numpy as np

from dftn.errors import DimensionError, ParameterError

from .tensor import DenseTensor, require_rank


def softmax(logits: DenseTensor) -> DenseTensor:
    """Row-wise softmax, stabilized by subtracting the row maximum"""
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def softmax_cross_entropy(logits: DenseTensor, labels: np.ndarray) -> Tuple[float, DenseTensor]:
    """
    Mean negative log-probability of the true class.

    Args:
        logits: ``[batch, G]``
        labels: Class indices in ``[0, G)``

    Returns:
        ``(loss, grad_logits)`` with ``grad = (softmax - onehot) / batch``
    """
    require_rank(logits, 2, "logits")
    labels = np.asarray(labels)
    batch, classes = logits.shape
    if labels.shape != (batch,):
        raise DimensionError(f"expected {batch} labels, got shape {labels.shape}")
    if batch == 0:
        raise DimensionError("cannot compute a loss over an empty batch")
    if np.any(labels < 0) or np.any(labels >= classes):
        raise ParameterError(f"labels must lie in [0, {classes})")

    shifted = logits - np.max(logits, axis=1, keepdims=True)
    log_norm = np.log(np.sum(np.exp(shifted), axis=1))
    rows = np.arange(batch)
    loss = float(np.mean(log_norm - shifted[rows, labels]))

    grad = softmax(logits)
    grad[rows, labels] -= 1.0
    return loss, grad / batch
