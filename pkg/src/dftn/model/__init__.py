"""
The ternary sensor-window network: topology, training, export and packed inference.
"""

from .checkpoint import load_checkpoint, save_checkpoint
from .export import LayerKind, PackedLayer, PackedModel, export_packed, infer_packed
from .forward import backward_train, forward_eval, forward_train, fusion_weights_for
from .network import (
    LayerInfo,
    NetworkConfig,
    activation_layer_names,
    feature_dims,
    init_params,
    layer_summary,
    weight_layer_names,
)
from .optimizer import adadelta_step, decay_learning_rate
from .train_state import TrainState
from .trainer import (
    EpochRecord,
    MetricsHistory,
    TrainingConfig,
    evaluate,
    predict,
    sweep_xi,
    train,
    update_activation_scales,
    zero_fractions,
)

__all__ = [
    "NetworkConfig",
    "LayerInfo",
    "layer_summary",
    "init_params",
    "feature_dims",
    "activation_layer_names",
    "weight_layer_names",
    "TrainState",
    "forward_train",
    "backward_train",
    "forward_eval",
    "fusion_weights_for",
    "adadelta_step",
    "decay_learning_rate",
    "TrainingConfig",
    "EpochRecord",
    "MetricsHistory",
    "train",
    "evaluate",
    "predict",
    "sweep_xi",
    "update_activation_scales",
    "zero_fractions",
    "LayerKind",
    "PackedLayer",
    "PackedModel",
    "export_packed",
    "infer_packed",
    "save_checkpoint",
    "load_checkpoint",
]
