"""
Ternary quantization: the epsilon-Q quantizer, weight and activation
calibration, straight-through gradients and reconstruction accounting.
"""

from .bounds import BoundCheck, reconstruction_bound_check
from .config import QuantConfig, QuantResult
from .functions import (
    activation_scale,
    epsilon_from_tau,
    phi,
    quantize_activations,
    quantize_linear,
    quantize_weights,
    round_half_away,
    solve_alpha,
    weight_scale,
)
from .ste import ste_activation_grad, ste_weight_grad

__all__ = [
    "QuantConfig",
    "QuantResult",
    "BoundCheck",
    "phi",
    "round_half_away",
    "quantize_linear",
    "weight_scale",
    "solve_alpha",
    "quantize_weights",
    "activation_scale",
    "epsilon_from_tau",
    "quantize_activations",
    "ste_weight_grad",
    "ste_activation_grad",
    "reconstruction_bound_check",
]
