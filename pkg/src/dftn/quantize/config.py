"""
Quantizer calibration knobs and the result of ternarizing one weight tensor.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from dftn.constants import (
    DEFAULT_EPSILON_A,
    DEFAULT_K_A,
    DEFAULT_K_W,
    DEFAULT_XI,
    ROUND_HALF_AWAY,
    ROUNDING_RULES,
)
from dftn.errors import ParameterError


@dataclass
class QuantConfig:
    """
    Calibration of the weight and activation quantizers.

    ``epsilon_a`` holds one activation scale per quantized activation layer;
    it is a plain list so the trainer can update it at every epoch boundary.
    When ``enabled`` is False the network runs in full precision.
    """

    k_w: int = DEFAULT_K_W
    k_a: int = DEFAULT_K_A
    xi: float = DEFAULT_XI
    epsilon_a: List[float] = field(default_factory=list)
    rounding: str = ROUND_HALF_AWAY
    enabled: bool = True

    def __post_init__(self):
        if self.k_w < 2 or self.k_a < 2:
            raise ParameterError(f"bit-widths must be >= 2, got k_w={self.k_w}, k_a={self.k_a}")
        if not self.xi > 0:
            raise ParameterError(f"xi must be positive, got {self.xi}")
        if self.rounding not in ROUNDING_RULES:
            raise ParameterError(
                f"unknown rounding rule '{self.rounding}', expected one of {ROUNDING_RULES}"
            )
        for value in self.epsilon_a:
            check_epsilon_a(value)

    def ensure_layers(self, count: int) -> None:
        """Grow ``epsilon_a`` to ``count`` entries, new layers starting at 1"""
        while len(self.epsilon_a) < count:
            self.epsilon_a.append(DEFAULT_EPSILON_A)

    def epsilon_for(self, layer: int) -> float:
        if layer < len(self.epsilon_a):
            return self.epsilon_a[layer]
        return DEFAULT_EPSILON_A


def check_epsilon_a(value: float) -> None:
    if not 0.0 < value <= 1.0:
        raise ParameterError(f"epsilon_a must lie in (0, 1], got {value}")


@dataclass
class QuantResult:
    """Ternary weights with their least-squares scale and calibration"""

    ternary: np.ndarray
    alpha: float
    epsilon_w: float
    support_set: np.ndarray
    reconstruction_error: float

    @property
    def zero_fraction(self) -> float:
        """Fraction of entries quantized to zero"""
        if self.ternary.size == 0:
            return 0.0
        return 1.0 - len(self.support_set) / self.ternary.size
