"""
The training loop: seeded shuffling, per-step fusion sampling, AdaDelta
updates of the shadow weights, per-epoch activation-scale calibration and
validation scoring.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from dftn.constants import (
    ADADELTA_DECAY,
    ADADELTA_LR,
    DEFAULT_BATCH,
    DEFAULT_EPOCHS,
    DEFAULT_SEED,
    DEFAULT_VALIDATION_FRACTION,
)
from dftn.core.losses import softmax_cross_entropy
from dftn.data.dataset import WindowDataset, train_validation_split
from dftn.data.metrics import weighted_f1
from dftn.errors import ConfigurationError, DegenerateInputError
from dftn.logging import get_logger, log_epoch_metrics
from dftn.quantize.functions import activation_scale, quantize_weights

from .export import PackedModel
from .forward import backward_train, forward_eval, forward_train, fusion_weights_for
from .network import weight_layer_names
from .optimizer import adadelta_step, decay_learning_rate
from .train_state import TrainState

logger = get_logger("dftn.model.trainer")

# Offset separating the fusion sampling stream from the shuffling stream
PHI_STREAM = 1


@dataclass
class TrainingConfig:
    epochs: int = DEFAULT_EPOCHS
    batch_size: int = DEFAULT_BATCH
    seed: int = DEFAULT_SEED
    learning_rate: float = ADADELTA_LR
    decay: float = ADADELTA_DECAY
    validation_fraction: float = DEFAULT_VALIDATION_FRACTION
    show_progress: bool = False

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch size must be positive, got {self.batch_size}")
        if not self.learning_rate > 0 or not 0 < self.decay <= 1:
            raise ConfigurationError("learning rate must be positive and decay in (0, 1]")


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_weighted_f1: float
    eps_a: List[float]
    zero_fraction: List[float]


@dataclass
class MetricsHistory:
    activation_layers: List[str]
    weight_layers: List[str]
    records: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final(self) -> Optional[EpochRecord]:
        return self.records[-1] if self.records else None

    def to_frame(self) -> pd.DataFrame:
        columns = (
            ["epoch", "train_loss", "val_weighted_f1"]
            + [f"eps_a[{name}]" for name in self.activation_layers]
            + [f"zero_fraction[{name}]" for name in self.weight_layers]
        )
        rows = [
            [r.epoch, r.train_loss, r.val_weighted_f1, *r.eps_a, *r.zero_fraction]
            for r in self.records
        ]
        return pd.DataFrame(rows, columns=columns)

    def to_csv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, index=False)


def update_activation_scales(state: TrainState) -> List[float]:
    """Recalibrate every layer's epsilon_a from its current shadow weights"""
    for index, name in enumerate(state.activation_layers):
        try:
            state.quant.epsilon_a[index] = activation_scale(state.params[f"{name}.weight"])
        except DegenerateInputError:
            logger.warning(f"{name}: all weights are zero, keeping epsilon_a unchanged")
    return list(state.quant.epsilon_a)


def zero_fractions(state: TrainState) -> List[float]:
    """Fraction of zero ternary weights per layer (0 in full precision)"""
    names = weight_layer_names(state.network, state.fusion)
    if not state.quant.enabled:
        return [0.0] * len(names)
    fractions = []
    for name in names:
        try:
            result = quantize_weights(state.params[f"{name}.weight"], state.quant)
            fractions.append(result.zero_fraction)
        except DegenerateInputError:
            fractions.append(1.0)
    return fractions


def predict(
    state: TrainState, windows: np.ndarray, phi_seed: Optional[int] = None
) -> np.ndarray:
    """
    Class predictions as deployed: the packed pipeline for quantized models,
    the dense network otherwise.
    """
    if state.quant.enabled:
        return PackedModel.from_state(state).infer(windows, phi_seed)[0]
    fusion = None if phi_seed is None else fusion_weights_for(state, phi_seed)
    return np.argmax(forward_eval(windows, state, fusion), axis=1)


def evaluate(state: TrainState, dataset: WindowDataset, phi_seed: Optional[int] = None) -> float:
    """Weighted F1 of ``predict`` on ``dataset``; NaN for an empty dataset"""
    if len(dataset) == 0:
        return float("nan")
    predictions = predict(state, dataset.windows, phi_seed)
    return weighted_f1(predictions, dataset.labels, dataset.num_classes)


def train(
    dataset: WindowDataset,
    state: TrainState,
    config: TrainingConfig,
    validation: Optional[WindowDataset] = None,
) -> Tuple[TrainState, MetricsHistory]:
    """
    Train ``state`` in place.

    When ``validation`` is omitted a stratified split of ``dataset`` is used.

    Raises:
        ConfigurationError: empty dataset or windows that do not fit the network
    """
    if len(dataset) == 0:
        raise ConfigurationError("training dataset is empty")
    if validation is None:
        dataset, validation = train_validation_split(
            dataset, config.validation_fraction, config.seed
        )
    if len(validation) == 0:
        logger.warning("Validation split is empty; weighted F1 will be reported as NaN")
    if dataset.num_classes != state.network.num_classes:
        raise ConfigurationError(
            f"dataset has {dataset.num_classes} classes, network expects "
            f"{state.network.num_classes}"
        )

    history = MetricsHistory(
        activation_layers=state.activation_layers,
        weight_layers=weight_layer_names(state.network, state.fusion),
    )
    shuffle_rng = np.random.default_rng(config.seed)
    phi_rng = np.random.default_rng([config.seed, PHI_STREAM])
    windows, labels = dataset.windows, dataset.labels
    count = len(dataset)

    logger.info(
        f"Training {count} windows for {config.epochs} epochs "
        f"(batch {config.batch_size}, fusion {state.fusion.mode.value}, "
        f"quantized {state.quant.enabled})"
    )
    epochs = tqdm(
        range(config.epochs),
        desc="Training",
        unit="epoch",
        colour="green",
        ncols=100,
        disable=not config.show_progress,
    )
    for _ in epochs:
        order = shuffle_rng.permutation(count)
        total_loss = 0.0
        for start in range(0, count, config.batch_size):
            index = order[start : start + config.batch_size]
            fusion = fusion_weights_for(state, phi_rng)
            logits, cache = forward_train(windows[index], state, fusion)
            loss, grad_logits = softmax_cross_entropy(logits, labels[index])
            adadelta_step(state, backward_train(cache, grad_logits, state))
            total_loss += loss * len(index)

        eps_a = update_activation_scales(state) if state.quant.enabled else []
        decay_learning_rate(state)
        state.epoch += 1
        record = EpochRecord(
            epoch=state.epoch,
            train_loss=total_loss / count,
            val_weighted_f1=evaluate(state, validation),
            eps_a=eps_a or [1.0] * len(history.activation_layers),
            zero_fraction=zero_fractions(state),
        )
        history.records.append(record)
        epochs.set_postfix(loss=f"{record.train_loss:.4f}", f1=f"{record.val_weighted_f1:.4f}")
        log_epoch_metrics(
            record.epoch,
            record.train_loss,
            record.val_weighted_f1,
            record.eps_a,
            record.zero_fraction,
        )
    return state, history


def sweep_xi(
    dataset: WindowDataset,
    validation: WindowDataset,
    make_state: Callable[[float], TrainState],
    xis: Sequence[float],
    config: TrainingConfig,
) -> pd.DataFrame:
    """
    Train once per shift threshold with identical seeds and collect the outcome.

    Returns:
        One row per xi: xi, fusion, final_train_loss, val_weighted_f1, zero_fraction_mean
    """
    rows = []
    for xi in xis:
        state, history = train(dataset, make_state(xi), config, validation)
        final = history.final
        rows.append(
            {
                "xi": xi,
                "fusion": state.fusion.mode.value,
                "final_train_loss": final.train_loss if final else float("nan"),
                "val_weighted_f1": final.val_weighted_f1 if final else evaluate(state, validation),
                "zero_fraction_mean": float(np.mean(zero_fractions(state))),
            }
        )
        logger.info(f"xi={xi}: weighted F1 {rows[-1]['val_weighted_f1']:.4f}")
    return pd.DataFrame(rows)
