"""
Hand-chained forward and backward passes of the whole network.

Per stack and conv block: ternarize weights, convolve, max-pool, batch-norm,
quantize activations. The flattened conv3 features are fused, passed through
the ternary dense layer, its batch norm and activation quantizer, and the
ternary output layer. Gradients flow back through the same chain with the
straight-through rules and land on the shadow weights.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from dftn.core.batchnorm import BatchNormCache, batchnorm_backward, batchnorm_forward_cached
from dftn.core.pooling import maxpool1d, maxpool1d_backward
from dftn.errors import ConfigurationError
from dftn.fusion.sampling import (
    FusionWeights,
    SeedLike,
    apply_fusion,
    identity_fusion,
    sample_fusion_weights,
)
from dftn.fusion.spec import FusionMode
from dftn.quantize.config import QuantConfig
from dftn.quantize.functions import quantize_activations
from dftn.quantize.ste import ste_activation_grad

from .layers import (
    EffectiveWeights,
    as_compute,
    effective_weights,
    ternary_conv_backward,
    ternary_conv_forward,
    ternary_dense_backward,
    ternary_dense_forward,
)
from .network import BN_FC, FC, OUT, bn_name, conv_name
from .train_state import TrainState


@dataclass
class BlockCache:
    inputs: np.ndarray
    weights: EffectiveWeights
    conv_length: int
    argmax: Optional[np.ndarray]
    bn: BatchNormCache
    pre_activation: np.ndarray


@dataclass
class ForwardCache:
    batch_size: int
    training: bool
    stacks: List[List[BlockCache]] = field(default_factory=list)
    stack_shapes: List[tuple] = field(default_factory=list)
    fusion: Optional[FusionWeights] = None
    fused: Optional[np.ndarray] = None
    fc_weights: Optional[EffectiveWeights] = None
    fc_bn: Optional[BatchNormCache] = None
    fc_pre_activation: Optional[np.ndarray] = None
    hidden: Optional[np.ndarray] = None
    out_weights: Optional[EffectiveWeights] = None


def activate(values: np.ndarray, quant: QuantConfig, layer: int) -> np.ndarray:
    """Activation quantizer, or ReLU for the full-precision counterpart"""
    if quant.enabled:
        return quantize_activations(values, quant, quant.epsilon_for(layer))
    return np.maximum(values, 0).astype(values.dtype, copy=False)


def activate_backward(grad: np.ndarray, values: np.ndarray, quant: QuantConfig) -> np.ndarray:
    if quant.enabled:
        return ste_activation_grad(grad, values)
    return np.where(values > 0, grad, 0).astype(grad.dtype, copy=False)


def conv3_weights(state: TrainState) -> List[np.ndarray]:
    last = state.network.blocks - 1
    return [state.params[f"{conv_name(s.name, last)}.weight"] for s in state.fusion.stacks()]


def fusion_weights_for(state: TrainState, rng: SeedLike = None) -> FusionWeights:
    """
    Fusion masks for one pass: Bernoulli draws for dynamic fusion, all ones otherwise.

    ``rng`` defaults to ``state.fusion.phi_seed``, which is what evaluation uses.
    """
    if state.fusion.mode != FusionMode.DYNAMIC:
        return identity_fusion(state.feature_dims)
    return sample_fusion_weights(
        state.fusion,
        conv3_weights(state),
        state.quant,
        state.fusion.phi_seed if rng is None else rng,
        feature_dims=state.feature_dims,
    )


def stack_inputs(batch: np.ndarray, start: int, stop: int) -> np.ndarray:
    """``[B, T, S]`` channels ``[start, stop)`` as ``[B * S_p, 1, T]``"""
    part = batch[:, :, start:stop]
    b, t, s = part.shape
    return np.ascontiguousarray(part.transpose(0, 2, 1)).reshape(b * s, 1, t)


def _check_batch(batch: np.ndarray, state: TrainState) -> None:
    expected = (state.network.window_t, state.fusion.sensor_channels)
    if batch.ndim != 3 or batch.shape[1:] != expected:
        raise ConfigurationError(
            f"batch must be [batch, {expected[0]}, {expected[1]}], got shape {batch.shape}"
        )


def forward_train(
    batch: np.ndarray,
    state: TrainState,
    fusion: Optional[FusionWeights] = None,
    training: bool = True,
):
    """
    Run the network on ``batch [B, T, S]``.

    Args:
        fusion: Masks to apply; drawn with the phi seed when omitted
        training: Batch statistics (and running-stat updates) versus running statistics

    Returns:
        ``(logits [B, G], ForwardCache)``
    """
    _check_batch(batch, state)
    batch = as_compute(batch)
    network, quant, params = state.network, state.quant, state.params
    cache = ForwardCache(batch_size=batch.shape[0], training=training)
    features: List[np.ndarray] = []
    layer = 0

    for stack in state.fusion.stacks():
        x = stack_inputs(batch, stack.start, stack.stop)
        blocks: List[BlockCache] = []
        for block in range(network.blocks):
            weights = effective_weights(params[f"{conv_name(stack.name, block)}.weight"], quant)
            conv = ternary_conv_forward(x, weights, network.strides[block])
            pool = network.pools[block]
            if pool > 1:
                pooled, argmax = maxpool1d(conv, pool)
            else:
                pooled, argmax = conv, None
            normed, bn_cache = batchnorm_forward_cached(
                pooled, state.bn[bn_name(stack.name, block)], training
            )
            blocks.append(
                BlockCache(
                    inputs=x,
                    weights=weights,
                    conv_length=conv.shape[-1],
                    argmax=argmax,
                    bn=bn_cache,
                    pre_activation=normed,
                )
            )
            x = activate(normed, quant, layer)
            layer += 1
        cache.stacks.append(blocks)
        cache.stack_shapes.append(x.shape)
        features.append(x.reshape(cache.batch_size, -1))

    cache.fusion = fusion if fusion is not None else fusion_weights_for(state)
    cache.fused = apply_fusion(features, cache.fusion)

    cache.fc_weights = effective_weights(params[f"{FC}.weight"], quant)
    hidden = ternary_dense_forward(cache.fused, cache.fc_weights, params[f"{FC}.bias"])
    cache.fc_pre_activation, cache.fc_bn = batchnorm_forward_cached(
        hidden, state.bn[BN_FC], training
    )
    cache.hidden = activate(cache.fc_pre_activation, quant, layer)

    cache.out_weights = effective_weights(params[f"{OUT}.weight"], quant)
    logits = ternary_dense_forward(cache.hidden, cache.out_weights, params[f"{OUT}.bias"])
    return logits, cache


def backward_train(
    cache: ForwardCache, grad_logits: np.ndarray, state: TrainState
) -> Dict[str, np.ndarray]:
    """Gradients of the loss with respect to every shadow parameter"""
    if not cache.training:
        raise ConfigurationError("backward needs a forward pass run in training mode")
    network, quant = state.network, state.quant
    grads: Dict[str, np.ndarray] = {}

    grad_hidden, grads[f"{OUT}.weight"], grads[f"{OUT}.bias"] = ternary_dense_backward(
        grad_logits, cache.hidden, cache.out_weights
    )
    grad_pre = activate_backward(grad_hidden, cache.fc_pre_activation, quant)
    grad_dense, grads[f"{BN_FC}.gamma"], grads[f"{BN_FC}.beta"] = batchnorm_backward(
        grad_pre, cache.fc_bn, state.bn[BN_FC]
    )
    grad_fused, grads[f"{FC}.weight"], grads[f"{FC}.bias"] = ternary_dense_backward(
        grad_dense, cache.fused, cache.fc_weights
    )

    offset = 0
    for stack, blocks, shape, mask in zip(
        state.fusion.stacks(), cache.stacks, cache.stack_shapes, cache.fusion.masks
    ):
        width = mask.shape[0]
        grad = grad_fused[:, offset : offset + width] * mask.astype(grad_fused.dtype)
        offset += width
        grad = grad.reshape(shape)
        for block in reversed(range(network.blocks)):
            bc = blocks[block]
            grad = activate_backward(grad, bc.pre_activation, quant)
            bn = bn_name(stack.name, block)
            grad, grads[f"{bn}.gamma"], grads[f"{bn}.beta"] = batchnorm_backward(
                grad, bc.bn, state.bn[bn]
            )
            pool = network.pools[block]
            if bc.argmax is not None:
                grad = maxpool1d_backward(grad, bc.argmax, pool, bc.conv_length)
            grad, grads[f"{conv_name(stack.name, block)}.weight"] = ternary_conv_backward(
                grad, bc.inputs, bc.weights, network.strides[block], need_input=block > 0
            )
    return grads


def forward_eval(
    windows: np.ndarray,
    state: TrainState,
    fusion: Optional[FusionWeights] = None,
    batch_size: int = 1024,
) -> np.ndarray:
    """Logits of the dense quantized network with running batch-norm statistics"""
    if fusion is None:
        fusion = fusion_weights_for(state)
    outputs = [
        forward_train(windows[start : start + batch_size], state, fusion, training=False)[0]
        for start in range(0, len(windows), batch_size)
    ]
    if not outputs:
        return np.zeros((0, state.network.num_classes), dtype=np.float32)
    return np.concatenate(outputs, axis=0)
