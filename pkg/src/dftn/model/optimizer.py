"""AdaDelta updates of the shadow weights, in place."""

from typing import Dict

import numpy as np

from dftn.errors import DimensionError

from .train_state import TrainState


def adadelta_step(state: TrainState, gradients: Dict[str, np.ndarray]) -> TrainState:
    """
    One AdaDelta step for every parameter with a gradient.

    ``E[g^2] <- rho E[g^2] + (1 - rho) g^2``,
    ``delta = sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g``,
    ``p <- p - lr * delta``, ``E[dx^2] <- rho E[dx^2] + (1 - rho) delta^2``.
    """
    rho, eps, lr = state.rho, state.eps, state.learning_rate
    for name, grad in gradients.items():
        param = state.params[name]
        if grad.shape != param.shape:
            raise DimensionError(f"{name}: gradient shape {grad.shape} != {param.shape}")
        square_avg = state.accum_grad[name]
        acc_delta = state.accum_update[name]

        square_avg *= rho
        square_avg += (1.0 - rho) * grad * grad
        delta = np.sqrt(acc_delta + eps) / np.sqrt(square_avg + eps) * grad
        param -= (lr * delta).astype(param.dtype, copy=False)
        acc_delta *= rho
        acc_delta += (1.0 - rho) * delta * delta
    return state


def decay_learning_rate(state: TrainState) -> float:
    """``lr <- decay * lr``, applied once per epoch"""
    state.learning_rate *= state.decay
    return state.learning_rate
