import numpy as np
import pytest

from dftn.fusion import build_fusion_spec
from dftn.model import TrainState
from dftn.quantize import QuantConfig


def to_float64(state: TrainState) -> TrainState:
    """Promote parameters and batch-norm statistics to float64 for finite differences"""
    for name in list(state.params):
        state.params[name] = state.params[name].astype(np.float64)
        state.accum_grad[name] = np.zeros_like(state.params[name])
        state.accum_update[name] = np.zeros_like(state.params[name])
    for name, norm in state.bn.items():
        norm.gamma = state.params[f"{name}.gamma"]
        norm.beta = state.params[f"{name}.beta"]
        norm.running_mu = norm.running_mu.astype(np.float64)
        norm.running_sigma = norm.running_sigma.astype(np.float64)
    return state


@pytest.fixture
def make_state(tiny_network, tiny_fusion):
    def factory(enabled=True, fusion=None, seed=3):
        return TrainState.create(
            network=tiny_network,
            fusion=fusion or tiny_fusion,
            quant=QuantConfig(enabled=enabled),
            seed=seed,
        )

    return factory


@pytest.fixture
def dynamic_fusion():
    return build_fusion_spec("dynamic", [("hand", 0, 2), ("back", 2, 4)], ["back"], phi_seed=11)
