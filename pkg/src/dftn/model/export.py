"""
Packed run-time model and the DFTN file format.

Layout (all integers and reals little-endian):

    "DFTN" | version u16 | layer count u16
    sensors u16 | window u16 | classes u16 | fusion mode u8 | phi seed u32 | branch count u8
    per branch: name length u8, utf-8 name, start u16, stop u16, reduced u8
    per layer:  kind u8 | k u8 | rank u8 | dims u32 * rank | alpha f64
                sign plane words u64 | value plane words u64
                conv:         branch u8 | stride u8 | pool u8 | (upper, lower) f64 per channel
                hidden dense: bias f64 per unit | (upper, lower) f64 per unit
                output dense: bias f64 per class

Batch-norm thresholds are folded into the raw pre-normalization space; the
sign of gamma is implied by the order of each ``(upper, lower)`` pair.
"""

import struct
from dataclasses import dataclass
from enum import IntEnum
from typing import List, Optional, Tuple

import numpy as np

from dftn.bitpack.batchnorm import (
    QuantBNThresholds,
    compute_thresholds,
    fold_running_stats,
    quantize_bn_apply,
)
from dftn.bitpack.kernels import conv1d_packed, dense_packed
from dftn.bitpack.packing import TernaryTensor, pack_ternary, unpack_ternary, word_count
from dftn.constants import DFTN_FORMAT_VERSION, DFTN_MAGIC
from dftn.core.losses import softmax
from dftn.core.pooling import maxpool1d
from dftn.core.tensor import DTYPE
from dftn.errors import ConfigurationError, DftnError, DimensionError, FormatError
from dftn.fusion.sampling import SeedLike, apply_fusion, identity_fusion, sample_fusion_weights
from dftn.fusion.spec import BranchSpec, FusionMode, FusionSpec
from dftn.logging import get_logger
from dftn.quantize.config import QuantConfig
from dftn.quantize.functions import quantize_weights

from .forward import stack_inputs
from .layers import EffectiveWeights, ternary_conv_forward
from .network import BN_FC, FC, OUT, bn_name, conv_name
from .train_state import TrainState

logger = get_logger("dftn.model.export")

_MODE_CODES = {FusionMode.EARLY: 0, FusionMode.LATE: 1, FusionMode.DYNAMIC: 2}
_CODE_MODES = {code: mode for mode, code in _MODE_CODES.items()}
_U8, _U16 = 0xFF, 0xFFFF


class LayerKind(IntEnum):
    INPUT_CONV = 1
    PACKED_CONV = 2
    HIDDEN_DENSE = 3
    OUTPUT_DENSE = 4


@dataclass(frozen=True)
class PackedLayer:
    kind: LayerKind
    weights: TernaryTensor
    branch: int = 0
    stride: int = 1
    pool: int = 1
    thresholds: Optional[QuantBNThresholds] = None
    bias: Optional[np.ndarray] = None

    @property
    def is_conv(self) -> bool:
        return self.kind in (LayerKind.INPUT_CONV, LayerKind.PACKED_CONV)


def _thresholds(state: TrainState, bn: str, layer: int) -> QuantBNThresholds:
    norm = state.bn[bn]
    folded = fold_running_stats(
        compute_thresholds(norm.gamma, norm.beta, state.quant.epsilon_for(layer)),
        norm.running_mu,
        norm.running_sigma,
    )
    if np.any(folded.upper == folded.lower):
        raise DftnError(f"{bn}: batch-norm threshold band collapsed during folding")
    return folded


def _pack(W: np.ndarray, quant: QuantConfig) -> TernaryTensor:
    result = quantize_weights(W, quant)
    return pack_ternary(result.ternary, result.alpha, quant.k_w)


@dataclass
class PackedModel:
    sensor_channels: int
    window_t: int
    num_classes: int
    fusion: FusionSpec
    layers: List[PackedLayer]

    @classmethod
    def from_state(cls, state: TrainState) -> "PackedModel":
        """Ternarize and pack every layer once and fold batch norm into thresholds"""
        if not state.quant.enabled:
            raise ConfigurationError("only quantized models can be exported")
        network, params = state.network, state.params
        layers: List[PackedLayer] = []
        activation = 0
        for index, stack in enumerate(state.fusion.stacks()):
            for block in range(network.blocks):
                layers.append(
                    PackedLayer(
                        kind=LayerKind.INPUT_CONV if block == 0 else LayerKind.PACKED_CONV,
                        weights=_pack(
                            params[f"{conv_name(stack.name, block)}.weight"], state.quant
                        ),
                        branch=index,
                        stride=network.strides[block],
                        pool=network.pools[block],
                        thresholds=_thresholds(state, bn_name(stack.name, block), activation),
                    )
                )
                activation += 1
        layers.append(
            PackedLayer(
                kind=LayerKind.HIDDEN_DENSE,
                weights=_pack(params[f"{FC}.weight"], state.quant),
                thresholds=_thresholds(state, BN_FC, activation),
                bias=params[f"{FC}.bias"].astype(np.float64),
            )
        )
        layers.append(
            PackedLayer(
                kind=LayerKind.OUTPUT_DENSE,
                weights=_pack(params[f"{OUT}.weight"], state.quant),
                bias=params[f"{OUT}.bias"].astype(np.float64),
            )
        )
        model = cls(
            sensor_channels=state.fusion.sensor_channels,
            window_t=network.window_t,
            num_classes=network.num_classes,
            fusion=state.fusion,
            layers=layers,
        )
        model.check_limits()
        return model

    def layer_names(self) -> List[str]:
        stacks = self.fusion.stacks()
        names = []
        block = {}
        for layer in self.layers:
            if layer.is_conv:
                stack = stacks[layer.branch].name
                block[stack] = block.get(stack, 0) + 1
                names.append(f"{stack}.conv{block[stack]}")
            else:
                names.append(FC if layer.kind == LayerKind.HIDDEN_DENSE else OUT)
        return names

    # Serialization

    def to_bytes(self) -> bytes:
        if not self.layers:
            raise FormatError("refusing to write a model without layers")
        self.check_limits()
        out = bytearray()
        out += struct.pack("<4sHH", DFTN_MAGIC, DFTN_FORMAT_VERSION, len(self.layers))
        out += struct.pack(
            "<HHHBIB",
            self.sensor_channels,
            self.window_t,
            self.num_classes,
            _MODE_CODES[self.fusion.mode],
            self.fusion.phi_seed,
            len(self.fusion.branches),
        )
        for branch in self.fusion.branches:
            name = branch.name.encode("utf-8")
            out += struct.pack("<B", len(name)) + name
            out += struct.pack("<HHB", branch.start, branch.stop, int(branch.reduced))
        for layer in self.layers:
            out += _layer_bytes(layer)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PackedModel":
        reader = _Reader(data)
        magic, version, count = reader.unpack("<4sHH")
        if magic != DFTN_MAGIC:
            raise FormatError(f"not a DFTN model (magic {magic!r})")
        if version != DFTN_FORMAT_VERSION:
            raise FormatError(
                f"unsupported format version {version}, expected {DFTN_FORMAT_VERSION}"
            )
        if count == 0:
            raise FormatError("model holds no layers")
        sensors, window_t, classes, mode_code, phi_seed, branch_count = reader.unpack("<HHHBIB")
        if mode_code not in _CODE_MODES:
            raise FormatError(f"unknown fusion mode code {mode_code}")
        branches = []
        for _ in range(branch_count):
            (length,) = reader.unpack("<B")
            name = reader.take(length).decode("utf-8")
            start, stop, reduced = reader.unpack("<HHB")
            branches.append(BranchSpec(name, start, stop, bool(reduced)))
        try:
            fusion = FusionSpec(
                mode=_CODE_MODES[mode_code], branches=tuple(branches), phi_seed=phi_seed
            )
        except DftnError as e:
            raise FormatError(f"invalid fusion header: {e}") from e
        layers = [_read_layer(reader) for _ in range(count)]
        if reader.remaining:
            raise FormatError(f"{reader.remaining} trailing bytes after the last layer")
        model = cls(sensors, window_t, classes, fusion, layers)
        model.validate()
        return model

    def validate(self) -> None:
        stacks = len(self.fusion.stacks())
        if self.layers[-1].kind != LayerKind.OUTPUT_DENSE:
            raise FormatError("last layer must be the output layer")
        if self.layers[-1].weights.shape[1] != self.num_classes:
            raise FormatError("output layer width does not match the class count")
        if sum(1 for layer in self.layers if layer.kind == LayerKind.HIDDEN_DENSE) != 1:
            raise FormatError("exactly one hidden dense layer is required")
        for layer in self.layers:
            if layer.is_conv and layer.branch >= stacks:
                raise FormatError(f"conv layer refers to missing branch {layer.branch}")
        for name, layer in zip(self.layer_names(), self.layers):
            if not layer.weights.is_canonical():
                raise FormatError(f"{name}: bit planes set padding bits or signs of zero weights")

    def check_limits(self) -> None:
        """Raise ConfigurationError for values the fixed-width file fields cannot hold"""
        for what, value, limit in (
            ("sensor channels", self.sensor_channels, _U16),
            ("window length", self.window_t, _U16),
            ("classes", self.num_classes, _U16),
            ("layers", len(self.layers), _U16),
            ("branches", len(self.fusion.branches), _U8),
        ):
            if value > limit:
                raise ConfigurationError(f"{what} {value} exceeds the file limit of {limit}")
        for branch in self.fusion.branches:
            if len(branch.name.encode("utf-8")) > _U8:
                raise ConfigurationError(
                    f"branch name '{branch.name[:20]}...' is longer than {_U8} bytes"
                )
        for layer in self.layers:
            if max(layer.stride, layer.pool) > _U8:
                raise ConfigurationError(
                    f"conv stride {layer.stride} and pool {layer.pool} must not exceed {_U8}"
                )

    def storage_bytes(self) -> int:
        return len(self.to_bytes())

    # Inference

    def logits(self, windows: np.ndarray, phi_seed: SeedLike = None, batch_size: int = 256):
        """Packed pipeline logits for ``windows [N, T, S]``"""
        windows = np.asarray(windows, dtype=DTYPE)
        expected = (self.window_t, self.sensor_channels)
        if windows.ndim != 3 or windows.shape[1:] != expected:
            raise DimensionError(
                f"model expects windows of shape [N, {expected[0]}, {expected[1]}], "
                f"got {windows.shape}"
            )
        seed = self.fusion.phi_seed if phi_seed is None else phi_seed
        fusion = None
        outputs = []
        for start in range(0, len(windows), batch_size):
            features = self._features(windows[start : start + batch_size])
            if fusion is None:
                fusion = self._fusion_weights([f.shape[1] for f in features], seed)
            outputs.append(self._head(apply_fusion(features, fusion)))
        if not outputs:
            return np.zeros((0, self.num_classes), dtype=DTYPE)
        return np.concatenate(outputs, axis=0)

    def infer(
        self, windows: np.ndarray, phi_seed: SeedLike = None, batch_size: int = 256
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Predicted classes and softmax probabilities, in window order"""
        logits = self.logits(windows, phi_seed, batch_size)
        return np.argmax(logits, axis=1), softmax(logits)

    def _features(self, windows: np.ndarray) -> List[np.ndarray]:
        features = []
        for index, stack in enumerate(self.fusion.stacks()):
            x = stack_inputs(windows, stack.start, stack.stop)
            for layer in self.layers:
                if not layer.is_conv or layer.branch != index:
                    continue
                if layer.kind == LayerKind.INPUT_CONV:
                    weights = EffectiveWeights(unpack_ternary(layer.weights), layer.weights.alpha)
                    conv = ternary_conv_forward(x, weights, layer.stride)
                else:
                    conv = conv1d_packed(pack_ternary(x), layer.weights, layer.stride)
                if layer.pool > 1:
                    conv = maxpool1d(conv, layer.pool)[0]
                x = quantize_bn_apply(conv, layer.thresholds)
            features.append(x.reshape(len(windows), -1))
        return features

    def _fusion_weights(self, dims: List[int], seed: SeedLike):
        if self.fusion.mode != FusionMode.DYNAMIC:
            return identity_fusion(dims)
        stacks = len(self.fusion.stacks())
        last_conv = {}
        for layer in self.layers:
            if layer.is_conv:
                last_conv[layer.branch] = layer.weights
        conv3 = [unpack_ternary(last_conv[index]) for index in range(stacks)]
        return sample_fusion_weights(
            self.fusion, conv3, QuantConfig(), seed, feature_dims=dims, quantized=True
        )

    def _head(self, fused: np.ndarray) -> np.ndarray:
        x = fused
        for layer in self.layers:
            if layer.is_conv:
                continue
            x = dense_packed(pack_ternary(x), layer.weights) + layer.bias.astype(DTYPE)
            if layer.kind == LayerKind.HIDDEN_DENSE:
                x = quantize_bn_apply(x, layer.thresholds)
        return x


def _layer_bytes(layer: PackedLayer) -> bytes:
    w = layer.weights
    out = bytearray(struct.pack("<BBB", int(layer.kind), w.k, len(w.shape)))
    out += struct.pack(f"<{len(w.shape)}I", *w.shape)
    out += struct.pack("<d", w.alpha)
    out += np.asarray(w.sign_plane, dtype="<u8").tobytes()
    out += np.asarray(w.value_plane, dtype="<u8").tobytes()
    if layer.is_conv:
        out += struct.pack("<BBB", layer.branch, layer.stride, layer.pool)
        out += _threshold_bytes(layer.thresholds)
    else:
        out += np.asarray(layer.bias, dtype="<f8").tobytes()
        if layer.kind == LayerKind.HIDDEN_DENSE:
            out += _threshold_bytes(layer.thresholds)
    return bytes(out)


def _threshold_bytes(thresholds: QuantBNThresholds) -> bytes:
    pairs = np.stack([thresholds.upper, thresholds.lower], axis=1)
    return np.asarray(pairs, dtype="<f8").tobytes()


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(data)
        self.offset = 0

    @property
    def remaining(self) -> int:
        return len(self.data) - self.offset

    def take(self, size: int) -> bytes:
        if size > self.remaining:
            raise FormatError(
                f"truncated model: needed {size} bytes at offset {self.offset}, "
                f"{self.remaining} left"
            )
        chunk = bytes(self.data[self.offset : self.offset + size])
        self.offset += size
        return chunk

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def array(self, dtype: str, count: int) -> np.ndarray:
        item = np.dtype(dtype).itemsize
        return np.frombuffer(self.take(item * count), dtype=dtype).copy()


def _read_thresholds(reader: _Reader, channels: int) -> QuantBNThresholds:
    pairs = reader.array("<f8", 2 * channels).reshape(channels, 2)
    try:
        return QuantBNThresholds.from_pairs(pairs[:, 0], pairs[:, 1])
    except DftnError as e:
        raise FormatError(str(e)) from e


def _read_layer(reader: _Reader) -> PackedLayer:
    kind_code, k, rank = reader.unpack("<BBB")
    try:
        kind = LayerKind(kind_code)
    except ValueError as e:
        raise FormatError(f"unknown layer kind {kind_code}") from e
    expected_rank = 3 if kind in (LayerKind.INPUT_CONV, LayerKind.PACKED_CONV) else 2
    if rank != expected_rank:
        raise FormatError(f"layer kind {kind.name} needs rank {expected_rank}, got {rank}")
    shape = reader.unpack(f"<{rank}I")
    (alpha,) = reader.unpack("<d")
    words = word_count(int(np.prod(shape, dtype=np.int64)))
    sign = reader.array("<u8", words)
    value = reader.array("<u8", words)
    try:
        weights = TernaryTensor(
            shape=tuple(shape), sign_plane=sign, value_plane=value, alpha=alpha, k=k
        )
    except DftnError as e:
        raise FormatError(f"invalid layer weights: {e}") from e

    if kind in (LayerKind.INPUT_CONV, LayerKind.PACKED_CONV):
        branch, stride, pool = reader.unpack("<BBB")
        if stride < 1 or pool < 1:
            raise FormatError("conv stride and pool must be positive")
        return PackedLayer(
            kind=kind,
            weights=weights,
            branch=branch,
            stride=stride,
            pool=pool,
            thresholds=_read_thresholds(reader, shape[0]),
        )
    bias = reader.array("<f8", shape[1])
    thresholds = _read_thresholds(reader, shape[1]) if kind == LayerKind.HIDDEN_DENSE else None
    return PackedLayer(kind=kind, weights=weights, thresholds=thresholds, bias=bias)


def export_packed(state: TrainState) -> bytes:
    """Packed DFTN bytes of a trained state"""
    data = PackedModel.from_state(state).to_bytes()
    logger.debug(f"Exported {len(data)} bytes for {len(state.params)} parameter arrays")
    return data


def infer_packed(
    model_bytes: bytes, windows: np.ndarray, phi_seed: SeedLike = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Load a DFTN model and classify ``windows [N, T, S]``"""
    return PackedModel.from_bytes(model_bytes).infer(windows, phi_seed)
