"""
Training checkpoints as ``.npz`` archives.

Arrays are stored under prefixed keys; everything else (topology, fusion,
quantizer calibration, optimizer scalars) goes into a JSON metadata entry.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from dftn.core.batchnorm import BatchNormState
from dftn.errors import FormatError
from dftn.fusion.spec import BranchSpec, FusionSpec
from dftn.quantize.config import QuantConfig

from .network import NetworkConfig
from .train_state import TrainState

META_KEY = "__meta__"
CHECKPOINT_VERSION = 1


def _metadata(state: TrainState) -> Dict[str, Any]:
    network = state.network
    return {
        "version": CHECKPOINT_VERSION,
        "network": {
            "num_classes": network.num_classes,
            "window_t": network.window_t,
            "kernels": list(network.kernels),
            "filters": list(network.filters),
            "strides": list(network.strides),
            "pools": list(network.pools),
            "dense_units": network.dense_units,
        },
        "fusion": {
            "mode": state.fusion.mode.value,
            "phi_seed": state.fusion.phi_seed,
            "branches": [[b.name, b.start, b.stop, b.reduced] for b in state.fusion.branches],
        },
        "quant": {
            "k_w": state.quant.k_w,
            "k_a": state.quant.k_a,
            "xi": state.quant.xi,
            "epsilon_a": list(state.quant.epsilon_a),
            "rounding": state.quant.rounding,
            "enabled": state.quant.enabled,
        },
        "epoch": state.epoch,
        "learning_rate": state.learning_rate,
        "decay": state.decay,
        "rho": state.rho,
        "eps": state.eps,
        "seed": state.seed,
        "bn": sorted(state.bn),
    }


def save_checkpoint(state: TrainState, path: Union[str, Path]) -> None:
    arrays: Dict[str, np.ndarray] = {META_KEY: np.array(json.dumps(_metadata(state)))}
    for name, value in state.params.items():
        arrays[f"param:{name}"] = value
        arrays[f"grad_avg:{name}"] = state.accum_grad[name]
        arrays[f"delta_avg:{name}"] = state.accum_update[name]
    for name, norm in state.bn.items():
        arrays[f"bn_mu:{name}"] = norm.running_mu
        arrays[f"bn_sigma:{name}"] = norm.running_sigma
    with open(path, "wb") as f:
        np.savez(f, **arrays)


def load_checkpoint(path: Union[str, Path]) -> TrainState:
    try:
        with np.load(path, allow_pickle=False) as archive:
            meta = json.loads(str(archive[META_KEY]))
            arrays = {key: archive[key] for key in archive.files if key != META_KEY}
    except (OSError, ValueError, KeyError) as e:
        raise FormatError(f"cannot read checkpoint {path}: {e}") from e
    if meta.get("version") != CHECKPOINT_VERSION:
        raise FormatError(f"unsupported checkpoint version {meta.get('version')}")

    def section(prefix: str) -> Dict[str, np.ndarray]:
        return {k[len(prefix) :]: v for k, v in arrays.items() if k.startswith(prefix)}

    params = section("param:")
    mu, sigma = section("bn_mu:"), section("bn_sigma:")
    try:
        bn = {
            name: BatchNormState(
                gamma=params[f"{name}.gamma"],
                beta=params[f"{name}.beta"],
                running_mu=mu[name],
                running_sigma=sigma[name],
            )
            for name in meta["bn"]
        }
        net = meta["network"]
        network = NetworkConfig(
            num_classes=net["num_classes"],
            window_t=net["window_t"],
            kernels=tuple(net["kernels"]),
            filters=tuple(net["filters"]),
            strides=tuple(net["strides"]),
            pools=tuple(net["pools"]),
            dense_units=net["dense_units"],
        )
        fusion = FusionSpec(
            mode=meta["fusion"]["mode"],
            branches=tuple(BranchSpec(*b) for b in meta["fusion"]["branches"]),
            phi_seed=meta["fusion"]["phi_seed"],
        )
        state = TrainState(
            network=network,
            fusion=fusion,
            quant=QuantConfig(**meta["quant"]),
            params=params,
            bn=bn,
            accum_grad=section("grad_avg:"),
            accum_update=section("delta_avg:"),
            epoch=meta["epoch"],
            learning_rate=meta["learning_rate"],
            decay=meta["decay"],
            rho=meta["rho"],
            eps=meta["eps"],
            seed=meta["seed"],
        )
    except KeyError as e:
        raise FormatError(f"checkpoint {path} is missing {e}") from e
    state.fusion = state.fusion.with_feature_dims(state.feature_dims)
    return state
