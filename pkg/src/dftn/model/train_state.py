"""Mutable training state: shadow weights, batch-norm statistics and AdaDelta accumulators."""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from dftn.constants import ADADELTA_DECAY, ADADELTA_EPS, ADADELTA_LR, ADADELTA_RHO, DEFAULT_SEED
from dftn.core.batchnorm import BatchNormState
from dftn.fusion.spec import FusionSpec
from dftn.quantize.config import QuantConfig

from .network import NetworkConfig, activation_layer_names, feature_dims, init_params


@dataclass
class TrainState:
    """
    Everything a trainer owns between steps.

    ``params`` are the full-precision shadow weights; ternary weights are
    derived from them on every forward pass and never written back.
    """

    network: NetworkConfig
    fusion: FusionSpec
    quant: QuantConfig
    params: Dict[str, np.ndarray]
    bn: Dict[str, BatchNormState]
    accum_grad: Dict[str, np.ndarray] = field(default_factory=dict)
    accum_update: Dict[str, np.ndarray] = field(default_factory=dict)
    epoch: int = 0
    learning_rate: float = ADADELTA_LR
    decay: float = ADADELTA_DECAY
    rho: float = ADADELTA_RHO
    eps: float = ADADELTA_EPS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        for name, value in self.params.items():
            self.accum_grad.setdefault(name, np.zeros_like(value))
            self.accum_update.setdefault(name, np.zeros_like(value))
        self.quant.ensure_layers(len(self.activation_layers))

    @classmethod
    def create(
        cls,
        network: NetworkConfig,
        fusion: FusionSpec,
        quant: QuantConfig,
        seed: int = DEFAULT_SEED,
        learning_rate: float = ADADELTA_LR,
        decay: float = ADADELTA_DECAY,
    ) -> "TrainState":
        """Freshly initialized state; the fusion spec gets its feature dims filled in"""
        fusion = fusion.with_feature_dims(feature_dims(network, fusion))
        params, bn = init_params(network, fusion, np.random.default_rng(seed))
        return cls(
            network=network,
            fusion=fusion,
            quant=quant,
            params=params,
            bn=bn,
            learning_rate=learning_rate,
            decay=decay,
            seed=seed,
        )

    @property
    def activation_layers(self) -> List[str]:
        return activation_layer_names(self.network, self.fusion)

    @property
    def feature_dims(self) -> List[int]:
        return feature_dims(self.network, self.fusion)
