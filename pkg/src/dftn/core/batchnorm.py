"""
Batch normalization over the channel axis (axis 1).

Statistics are reduced over every other axis, so the same code serves conv
feature maps ``[N, C, T]`` and dense activations ``[N, C]``. ``running_sigma``
tracks the stabilized standard deviation ``sqrt(var + epsilon)``.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from dftn.constants import BN_EPSILON, BN_MOMENTUM
from dftn.errors import DimensionError, ParameterError

from .tensor import DTYPE, DenseTensor


@dataclass
class BatchNormState:
    """Learnable affine parameters plus running statistics of one BN layer"""

    gamma: np.ndarray
    beta: np.ndarray
    running_mu: np.ndarray
    running_sigma: np.ndarray
    momentum: float = BN_MOMENTUM
    epsilon_stabilizer: float = BN_EPSILON

    def __post_init__(self):
        sizes = {
            len(self.gamma),
            len(self.beta),
            len(self.running_mu),
            len(self.running_sigma),
        }
        if len(sizes) != 1:
            raise DimensionError("gamma, beta and running statistics must share one length")
        if not 0.0 < self.momentum < 1.0:
            raise ParameterError(f"momentum must lie in (0, 1), got {self.momentum}")
        if self.epsilon_stabilizer <= 0:
            raise ParameterError("epsilon_stabilizer must be positive")

    @classmethod
    def create(cls, channels: int, dtype=DTYPE) -> "BatchNormState":
        """Fresh state: gamma=1, beta=0, running mean 0 and sigma 1"""
        return cls(
            gamma=np.ones(channels, dtype=dtype),
            beta=np.zeros(channels, dtype=dtype),
            running_mu=np.zeros(channels, dtype=dtype),
            running_sigma=np.ones(channels, dtype=dtype),
        )

    @property
    def channels(self) -> int:
        return len(self.gamma)


@dataclass
class BatchNormCache:
    x_hat: np.ndarray
    sigma: np.ndarray
    axes: Tuple[int, ...] = field(default_factory=tuple)


def _broadcast(values: np.ndarray, ndim: int) -> np.ndarray:
    return values.reshape((1, -1) + (1,) * (ndim - 2))


def batchnorm_forward_cached(
    x: DenseTensor, state: BatchNormState, training: bool = True
) -> Tuple[DenseTensor, BatchNormCache]:
    """Normalize ``x``; in training mode also fold batch statistics into the running ones"""
    if x.ndim < 2 or x.shape[1] != state.channels:
        raise DimensionError(
            f"batch norm expects {state.channels} channels on axis 1, got shape {x.shape}"
        )
    axes = (0,) + tuple(range(2, x.ndim))
    if training:
        mu = x.mean(axis=axes)
        var = ((x - _broadcast(mu, x.ndim)) ** 2).mean(axis=axes)
        sigma = np.sqrt(var + state.epsilon_stabilizer).astype(x.dtype, copy=False)
        m = state.momentum
        state.running_mu[...] = (1.0 - m) * state.running_mu + m * mu
        state.running_sigma[...] = (1.0 - m) * state.running_sigma + m * sigma
    else:
        mu = state.running_mu
        sigma = state.running_sigma
    x_hat = (x - _broadcast(mu, x.ndim)) / _broadcast(sigma, x.ndim)
    out = _broadcast(state.gamma, x.ndim) * x_hat + _broadcast(state.beta, x.ndim)
    return out.astype(x.dtype, copy=False), BatchNormCache(x_hat=x_hat, sigma=sigma, axes=axes)


def batchnorm_forward(x: DenseTensor, state: BatchNormState, training: bool = True) -> DenseTensor:
    """``gamma * (x - mu) / sigma + beta`` with batch (training) or running statistics"""
    return batchnorm_forward_cached(x, state, training)[0]


def batchnorm_backward(
    grad_out: DenseTensor, cache: BatchNormCache, state: BatchNormState
) -> Tuple[DenseTensor, np.ndarray, np.ndarray]:
    """
    Backward pass through a training-mode batch norm.

    Returns:
        ``(grad_input, grad_gamma, grad_beta)``
    """
    x_hat = cache.x_hat
    if grad_out.shape != x_hat.shape:
        raise DimensionError(f"grad_out shape {grad_out.shape} does not match {x_hat.shape}")
    axes = cache.axes
    ndim = x_hat.ndim
    n = x_hat.size // x_hat.shape[1]

    grad_gamma = np.sum(grad_out * x_hat, axis=axes)
    grad_beta = np.sum(grad_out, axis=axes)
    grad_x_hat = grad_out * _broadcast(state.gamma, ndim)
    sum1 = _broadcast(np.sum(grad_x_hat, axis=axes), ndim)
    sum2 = _broadcast(np.sum(grad_x_hat * x_hat, axis=axes), ndim)
    grad_input = (n * grad_x_hat - sum1 - x_hat * sum2) / (n * _broadcast(cache.sigma, ndim))
    return grad_input, grad_gamma, grad_beta
