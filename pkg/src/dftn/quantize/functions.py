"""
The epsilon-Q quantizer and its calibrated uses.

``quantize_linear`` maps reals onto the uniform grid of spacing
``phi(k) = 2**(1-k)`` clipped to ``[-1+phi, 1-phi]``; for 2 bits the grid is
``{-0.5, 0, 0.5}``. Ties round half away from zero everywhere.
"""

from typing import Optional, Union

import numpy as np

from dftn.errors import DegenerateInputError, ParameterError
from dftn.logging import get_logger

from .config import QuantConfig, QuantResult, check_epsilon_a

logger = get_logger("dftn.quantize")

ArrayLike = Union[float, np.ndarray]


def phi(k: int) -> float:
    """Grid distance ``2**(1-k)``"""
    if k < 2:
        raise ParameterError(f"bit-width must be >= 2, got {k}")
    return 2.0 ** (1 - k)


def round_half_away(x: ArrayLike) -> ArrayLike:
    """Round to the nearest integer, ties away from zero (numpy rounds half to even)"""
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize_linear(x: ArrayLike, epsilon: float, k: int) -> ArrayLike:
    """
    ``clip(phi * round(x * epsilon / phi), -1 + phi, 1 - phi)``

    Works elementwise on scalars or arrays and keeps the input dtype for arrays.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    step = phi(k)
    scaled = np.asarray(x) * epsilon / step
    q = np.clip(step * round_half_away(scaled), -1.0 + step, 1.0 - step) + 0.0
    if np.ndim(x) == 0:
        return float(q)
    return q.astype(np.asarray(x).dtype, copy=False)


def weight_scale(W: np.ndarray, xi: float) -> float:
    """``epsilon_w = n / (xi * sum|W|)``; the implied zero-threshold is ``xi * mean|W| / 4``"""
    if not xi > 0:
        raise ParameterError(f"xi must be positive, got {xi}")
    W = np.asarray(W)
    total = float(np.sum(np.abs(W), dtype=np.float64))
    if W.size == 0 or total == 0.0:
        raise DegenerateInputError("cannot calibrate weight scale of an all-zero tensor")
    return W.size / (xi * total)


def solve_alpha(W: np.ndarray, T: np.ndarray) -> float:
    """Least-squares scale ``<W, T> / <T, T>`` for a fixed ternary pattern"""
    W = np.asarray(W, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    denom = float(np.dot(T.ravel(), T.ravel()))
    if denom == 0.0:
        raise DegenerateInputError("alpha is undefined for an all-zero ternary tensor")
    return float(np.dot(W.ravel(), T.ravel())) / denom


def quantize_weights(W: np.ndarray, cfg: QuantConfig) -> QuantResult:
    """
    Ternarize ``W`` with ``epsilon_w`` from ``cfg.xi`` and fit alpha.

    When every entry falls below the zero-threshold alpha falls back to 0 and a
    calibration warning is logged.
    """
    W = np.asarray(W)
    epsilon_w = weight_scale(W, cfg.xi)
    T = quantize_linear(W, epsilon_w, cfg.k_w)
    try:
        alpha = solve_alpha(W, T)
    except DegenerateInputError:
        logger.warning(
            f"All {W.size} weights quantized to zero (xi={cfg.xi}); falling back to alpha=0"
        )
        alpha = 0.0
    support = np.flatnonzero(T)
    residual = W.astype(np.float64) - alpha * T.astype(np.float64)
    return QuantResult(
        ternary=T,
        alpha=alpha,
        epsilon_w=epsilon_w,
        support_set=support,
        reconstruction_error=float(np.linalg.norm(residual)),
    )


def epsilon_from_tau(tau: float) -> float:
    """``min(1, 2**-round(tau))``"""
    return float(min(1.0, 2.0 ** (-round_half_away(tau))))


def activation_scale(W_layer: np.ndarray) -> float:
    """
    Activation scale of the layer fed by ``W_layer``.

    ``tau = mean|w| / max|w|``. The absolute maximum is used so all-negative
    layers stay well defined.
    """
    W = np.abs(np.asarray(W_layer, dtype=np.float64))
    if W.size == 0:
        raise DegenerateInputError("activation scale needs at least one weight")
    peak = float(W.max())
    if peak == 0.0:
        raise DegenerateInputError("activation scale is undefined for an all-zero layer")
    return epsilon_from_tau(float(W.mean()) / peak)


def quantize_activations(
    A: np.ndarray, cfg: QuantConfig, epsilon_a: Optional[float] = None
) -> np.ndarray:
    """Elementwise ``Q_{k_a}(A, epsilon_a)``; ``epsilon_a`` defaults to the first layer's scale"""
    if epsilon_a is None:
        epsilon_a = cfg.epsilon_for(0)
    check_epsilon_a(epsilon_a)
    return quantize_linear(A, epsilon_a, cfg.k_a)
