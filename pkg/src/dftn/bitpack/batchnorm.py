"""
Quantized batch norm in threshold form.

``Q_2(gamma * x_hat + beta, eps)`` only needs two comparisons per channel:
for ``gamma > 0`` the output is +0.5 when ``x_hat >= upper``, -0.5 when
``x_hat <= lower`` and 0 in between, with

    upper = (1/(4 eps) - beta) / gamma
    lower = -(1/(4 eps) + beta) / gamma

For ``gamma < 0`` both comparisons flip. Boundaries are inclusive because the
quantizer rounds ties away from zero.
"""

from dataclasses import dataclass

import numpy as np

from dftn.errors import DegenerateInputError, DimensionError


@dataclass(frozen=True)
class QuantBNThresholds:
    upper: np.ndarray
    lower: np.ndarray
    gamma_sign: np.ndarray

    def __post_init__(self):
        if not (len(self.upper) == len(self.lower) == len(self.gamma_sign)):
            raise DimensionError("threshold arrays must share one length")

    @property
    def channels(self) -> int:
        return len(self.upper)

    @classmethod
    def from_pairs(cls, upper: np.ndarray, lower: np.ndarray) -> "QuantBNThresholds":
        """
        Rebuild thresholds from stored ``(upper, lower)`` pairs.

        The sign of gamma is implied by their order.
        """
        upper = np.asarray(upper, dtype=np.float64)
        lower = np.asarray(lower, dtype=np.float64)
        if np.any(upper == lower):
            raise DegenerateInputError("threshold band collapsed; gamma sign is ambiguous")
        return cls(upper=upper, lower=lower, gamma_sign=np.where(upper > lower, 1.0, -1.0))


def compute_thresholds(gamma: np.ndarray, beta: np.ndarray, epsilon: float) -> QuantBNThresholds:
    """Per-channel thresholds in normalized (``x_hat``) space, in float64"""
    gamma = np.asarray(gamma, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if gamma.shape != beta.shape:
        raise DimensionError("gamma and beta must share one length")
    if np.any(gamma == 0):
        channels = np.flatnonzero(gamma == 0).tolist()
        raise DegenerateInputError(f"gamma is zero on channels {channels}")
    quarter = 1.0 / (4.0 * epsilon)
    return QuantBNThresholds(
        upper=(quarter - beta) / gamma,
        lower=-(quarter + beta) / gamma,
        gamma_sign=np.sign(gamma),
    )


def fold_running_stats(
    thresholds: QuantBNThresholds, running_mu: np.ndarray, running_sigma: np.ndarray
) -> QuantBNThresholds:
    """Move thresholds from ``x_hat`` space to raw pre-normalization ``x = mu + sigma * x_hat``"""
    mu = np.asarray(running_mu, dtype=np.float64)
    sigma = np.asarray(running_sigma, dtype=np.float64)
    if np.any(sigma <= 0):
        raise DegenerateInputError("running sigma must be positive to fold thresholds")
    return QuantBNThresholds(
        upper=mu + sigma * thresholds.upper,
        lower=mu + sigma * thresholds.lower,
        gamma_sign=thresholds.gamma_sign,
    )


def quantize_bn_apply(x: np.ndarray, thresholds: QuantBNThresholds) -> np.ndarray:
    """
    Ternary output of the thresholded batch norm; channels on axis 1.

    Returns values in ``{-0.5, 0, 0.5}`` with the dtype of ``x``.
    """
    if x.ndim < 2 or x.shape[1] != thresholds.channels:
        raise DimensionError(
            f"expected {thresholds.channels} channels on axis 1, got shape {x.shape}"
        )
    shape = (1, -1) + (1,) * (x.ndim - 2)
    upper = thresholds.upper.reshape(shape)
    lower = thresholds.lower.reshape(shape)
    positive = thresholds.gamma_sign.reshape(shape) > 0
    values = x.astype(np.float64)
    plus = np.where(positive, values >= upper, values <= upper)
    minus = np.where(positive, values <= lower, values >= lower)
    return np.where(plus, 0.5, np.where(minus, -0.5, 0.0)).astype(x.dtype)
