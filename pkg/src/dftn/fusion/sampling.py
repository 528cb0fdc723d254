"""
Bernoulli fusion weights.

Each reduced branch keeps feature ``d`` with probability
``p = sum|W_q| / m`` where ``W_q`` is the branch's ternarized conv3 kernel.
Non-reduced branches keep every feature.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from dftn.errors import DegenerateInputError, DimensionError
from dftn.logging import get_logger
from dftn.quantize.config import QuantConfig
from dftn.quantize.functions import quantize_linear, weight_scale

from .spec import FusionSpec

logger = get_logger("dftn.fusion")

SeedLike = Union[int, np.random.Generator, None]


@dataclass
class FusionWeights:
    masks: List[np.ndarray]
    keep_probability: List[float]

    def is_identity(self) -> bool:
        return all(bool(np.all(mask == 1)) for mask in self.masks)


def keep_probability(W_q: np.ndarray) -> float:
    """``sum|W_q| / m``; at most 0.5 for 2-bit weights"""
    W_q = np.asarray(W_q)
    if W_q.size == 0:
        raise DegenerateInputError("keep probability of an empty tensor is undefined")
    return float(np.sum(np.abs(W_q), dtype=np.float64) / W_q.size)


def _ternarize(W: np.ndarray, cfg: QuantConfig) -> np.ndarray:
    try:
        return quantize_linear(W, weight_scale(W, cfg.xi), cfg.k_w)
    except DegenerateInputError:
        return np.zeros_like(W)


def sample_fusion_weights(
    spec: FusionSpec,
    conv3_weights: Sequence[np.ndarray],
    cfg: QuantConfig,
    rng: SeedLike,
    feature_dims: Optional[Sequence[int]] = None,
    quantized: bool = False,
) -> FusionWeights:
    """
    Draw one fusion mask per sub-network.

    Args:
        spec: Fusion topology
        conv3_weights: Per-stack conv3 kernels, full precision unless ``quantized``
        cfg: Quantizer calibration used to ternarize full-precision kernels
        rng: Generator or seed; reduced branches draw ``rng.random(D)`` in branch order
        feature_dims: Flattened conv3 length per stack, defaults to ``spec.feature_dims``
        quantized: True when ``conv3_weights`` are already ternary (run time)
    """
    stacks = spec.stacks()
    dims = list(feature_dims if feature_dims is not None else spec.feature_dims)
    if len(dims) != len(stacks) or len(conv3_weights) != len(stacks):
        raise DimensionError(
            f"expected {len(stacks)} feature dims and conv3 kernels, "
            f"got {len(dims)} and {len(conv3_weights)}"
        )
    generator = np.random.default_rng(rng)
    masks: List[np.ndarray] = []
    probabilities: List[float] = []
    for branch, dim, weights in zip(stacks, dims, conv3_weights):
        if not branch.reduced:
            masks.append(np.ones(dim, dtype=np.float32))
            probabilities.append(1.0)
            continue
        W_q = np.asarray(weights) if quantized else _ternarize(np.asarray(weights), cfg)
        p = keep_probability(W_q)
        masks.append((generator.random(dim) < p).astype(np.float32))
        probabilities.append(p)
        if p == 0.0:
            logger.debug(f"Branch '{branch.name}' muted: all conv3 weights quantized to zero")
    return FusionWeights(masks=masks, keep_probability=probabilities)


def identity_fusion(feature_dims: Sequence[int]) -> FusionWeights:
    return FusionWeights(
        masks=[np.ones(dim, dtype=np.float32) for dim in feature_dims],
        keep_probability=[1.0] * len(feature_dims),
    )


def apply_fusion(feature_maps: Sequence[np.ndarray], weights: FusionWeights) -> np.ndarray:
    """Mask each ``[batch, D_p]`` map with its weights and concatenate in branch order"""
    if len(feature_maps) != len(weights.masks):
        raise DimensionError(
            f"got {len(feature_maps)} feature maps for {len(weights.masks)} fusion masks"
        )
    parts = []
    for index, (features, mask) in enumerate(zip(feature_maps, weights.masks)):
        if features.shape[-1] != mask.shape[0]:
            raise DimensionError(
                f"branch {index}: feature length {features.shape[-1]} does not match "
                f"mask length {mask.shape[0]}"
            )
        parts.append(features * mask.astype(features.dtype))
    return np.concatenate(parts, axis=-1)
