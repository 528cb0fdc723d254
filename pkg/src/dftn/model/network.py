"""
Network topology, parameter naming, initialization and layer accounting.

Every sub-network (one per fusion stack) slides three conv kernels over time
on each of its sensor channels independently, so sensor channels are folded
into the batch axis. Each conv block is Conv -> MaxPool -> BatchNorm ->
activation quantizer. The flattened conv3 features of all stacks are fused
and fed to a 1000-unit ternary dense layer with batch norm, then to a ternary
output layer producing real logits.
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from dftn.constants import (
    CONV_FILTERS,
    CONV_KERNELS,
    CONV_STRIDES,
    DEFAULT_WINDOW_T,
    DENSE_UNITS,
    POOL_SIZES,
)
from dftn.core.batchnorm import BatchNormState
from dftn.core.conv import conv_output_length
from dftn.core.tensor import DTYPE
from dftn.errors import ConfigurationError, DftnError
from dftn.fusion.spec import FusionSpec

FC = "fc"
BN_FC = "bn_fc"
OUT = "out"
BYTES_PER_REAL = 4


@dataclass(frozen=True)
class NetworkConfig:
    num_classes: int
    window_t: int = DEFAULT_WINDOW_T
    kernels: Tuple[int, ...] = CONV_KERNELS
    filters: Tuple[int, ...] = CONV_FILTERS
    strides: Tuple[int, ...] = CONV_STRIDES
    pools: Tuple[int, ...] = POOL_SIZES
    dense_units: int = DENSE_UNITS

    def __post_init__(self):
        blocks = {len(self.kernels), len(self.filters), len(self.strides), len(self.pools)}
        if len(blocks) != 1:
            raise ConfigurationError("kernels, filters, strides and pools must have equal length")
        if self.num_classes < 2:
            raise ConfigurationError(f"need at least 2 classes, got {self.num_classes}")
        if self.dense_units < 1 or min(self.filters) < 1 or min(self.pools) < 1:
            raise ConfigurationError("layer sizes must be positive")
        self.time_lengths()

    @property
    def blocks(self) -> int:
        return len(self.kernels)

    def time_lengths(self) -> List[Tuple[int, int]]:
        """``(conv output, pooled output)`` time length of every conv block"""
        lengths = []
        t = self.window_t
        for kernel, stride, pool in zip(self.kernels, self.strides, self.pools):
            try:
                conv = conv_output_length(t, kernel, stride)
            except DftnError as e:
                raise ConfigurationError(f"window length {self.window_t} is too short: {e}") from e
            t = conv // pool
            if t < 1:
                raise ConfigurationError(
                    f"window length {self.window_t} leaves no samples after pooling"
                )
            lengths.append((conv, t))
        return lengths

    def feature_length(self) -> int:
        """Time length of the conv3 output"""
        return self.time_lengths()[-1][1]

    def feature_dim(self, channels: int) -> int:
        """Flattened conv3 length of a stack over ``channels`` sensors"""
        return channels * self.filters[-1] * self.feature_length()


def conv_name(stack: str, block: int) -> str:
    return f"{stack}.conv{block + 1}"


def bn_name(stack: str, block: int) -> str:
    return f"{stack}.bn{block + 1}"


def weight_layer_names(network: NetworkConfig, fusion: FusionSpec) -> List[str]:
    """Ternarized layers in forward order"""
    names = [conv_name(s.name, b) for s in fusion.stacks() for b in range(network.blocks)]
    return names + [FC, OUT]


def activation_layer_names(network: NetworkConfig, fusion: FusionSpec) -> List[str]:
    """Layers whose outputs pass through the activation quantizer, one epsilon_a each"""
    names = [conv_name(s.name, b) for s in fusion.stacks() for b in range(network.blocks)]
    return names + [FC]


def feature_dims(network: NetworkConfig, fusion: FusionSpec) -> List[int]:
    return [network.feature_dim(stack.channels) for stack in fusion.stacks()]


def _glorot(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int, fan_out: int):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(DTYPE)


def init_params(
    network: NetworkConfig, fusion: FusionSpec, rng: np.random.Generator
) -> Tuple[Dict[str, np.ndarray], Dict[str, BatchNormState]]:
    """
    Glorot-uniform shadow weights, zero biases and fresh batch-norm states.

    Batch-norm gamma/beta live in the returned parameter dict; the states
    reference the same arrays so optimizer updates reach them.
    """
    params: Dict[str, np.ndarray] = {}
    bn: Dict[str, BatchNormState] = {}

    def add_bn(name: str, channels: int) -> None:
        state = BatchNormState.create(channels)
        params[f"{name}.gamma"] = state.gamma
        params[f"{name}.beta"] = state.beta
        bn[name] = state

    for stack in fusion.stacks():
        c_in = 1
        for block, (kernel, filters) in enumerate(zip(network.kernels, network.filters)):
            params[f"{conv_name(stack.name, block)}.weight"] = _glorot(
                rng, (filters, c_in, kernel), c_in * kernel, filters * kernel
            )
            add_bn(bn_name(stack.name, block), filters)
            c_in = filters

    total = sum(feature_dims(network, fusion))
    params[f"{FC}.weight"] = _glorot(rng, (total, network.dense_units), total, network.dense_units)
    params[f"{FC}.bias"] = np.zeros(network.dense_units, dtype=DTYPE)
    add_bn(BN_FC, network.dense_units)
    params[f"{OUT}.weight"] = _glorot(
        rng, (network.dense_units, network.num_classes), network.dense_units, network.num_classes
    )
    params[f"{OUT}.bias"] = np.zeros(network.num_classes, dtype=DTYPE)
    return params, bn


class LayerInfo(NamedTuple):
    name: str
    weight_shape: Tuple[int, ...]
    params: int
    flops: int
    dense_bytes: int
    packed_bytes: int

    @property
    def compression(self) -> float:
        return self.dense_bytes / self.packed_bytes


def packed_weight_bytes(count: int, rank: int) -> int:
    """Two bit planes in 64-bit words, alpha and the shape header"""
    words = (count + 63) // 64
    return 2 * words * 8 + 8 + 1 + 4 * rank


def layer_summary(
    network: NetworkConfig,
    sensor_channels: int,
    window_t: Optional[int] = None,
    stacks: int = 1,
) -> List[LayerInfo]:
    """
    Per learnable layer: weight shape, parameter count, FLOPs per window
    (two per multiply-accumulate), 32-bit dense bytes and packed 2-bit bytes.

    Conv rows describe one sub-network's kernels times ``stacks``; the dense
    layer sees the flattened features of all ``sensor_channels``.
    """
    if window_t is not None and window_t != network.window_t:
        network = NetworkConfig(
            num_classes=network.num_classes,
            window_t=window_t,
            kernels=network.kernels,
            filters=network.filters,
            strides=network.strides,
            pools=network.pools,
            dense_units=network.dense_units,
        )
    rows: List[LayerInfo] = []
    c_in = 1
    for block, ((conv_t, _), kernel, filters) in enumerate(
        zip(network.time_lengths(), network.kernels, network.filters)
    ):
        shape = (filters, c_in, kernel)
        count = filters * c_in * kernel * stacks
        macs = sensor_channels * conv_t * filters * c_in * kernel
        rows.append(
            LayerInfo(
                name=f"conv{block + 1}",
                weight_shape=shape,
                params=count,
                flops=2 * macs,
                dense_bytes=BYTES_PER_REAL * count,
                packed_bytes=stacks * packed_weight_bytes(count // stacks, 3),
            )
        )
        c_in = filters

    for name, n_in, n_out in (
        (FC, network.feature_dim(sensor_channels), network.dense_units),
        (OUT, network.dense_units, network.num_classes),
    ):
        count = n_in * n_out
        rows.append(
            LayerInfo(
                name=name,
                weight_shape=(n_in, n_out),
                params=count,
                flops=2 * count,
                dense_bytes=BYTES_PER_REAL * count,
                packed_bytes=packed_weight_bytes(count, 2),
            )
        )
    return rows
