"""
Loading trained models for eval and infer.

A model is either a packed ``.dftn`` file or a ``.npz`` training checkpoint.
Quantized checkpoints run through the packed pipeline as well, so every
quantized model is scored exactly as it would be deployed.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from dftn.core.losses import softmax
from dftn.data.dataset import WindowDataset
from dftn.errors import ConfigurationError
from dftn.logging import log_artifact_event
from dftn.model import PackedModel, TrainState, forward_eval, fusion_weights_for, load_checkpoint


@dataclass
class LoadedModel:
    path: Path
    model: Union[PackedModel, TrainState]

    @classmethod
    def load(cls, path: Path) -> "LoadedModel":
        if path.suffix == ".npz":
            state = load_checkpoint(path)
            log_artifact_event("read", str(path), path.stat().st_size)
            if state.quant.enabled:
                return cls(path, PackedModel.from_state(state))
            return cls(path, state)
        data = path.read_bytes()
        log_artifact_event("read", str(path), len(data))
        return cls(path, PackedModel.from_bytes(data))

    @property
    def shape(self) -> Tuple[int, int, int]:
        """``(sensor channels, window length, classes)``"""
        if isinstance(self.model, PackedModel):
            return self.model.sensor_channels, self.model.window_t, self.model.num_classes
        network = self.model.network
        return self.model.fusion.sensor_channels, network.window_t, network.num_classes

    def check_compatible(self, dataset: WindowDataset) -> None:
        """
        Raises:
            ConfigurationError: sensor channels, window length or class count differ
        """
        sensors, window_t, classes = self.shape
        if (sensors, window_t) != (dataset.sensor_channels, dataset.window_t):
            raise ConfigurationError(
                f"model expects windows of {window_t} x {sensors}, dataset has "
                f"{dataset.window_t} x {dataset.sensor_channels}"
            )
        if classes != dataset.num_classes:
            raise ConfigurationError(
                f"model has {classes} classes but the dataset has {dataset.num_classes}"
            )

    def infer(
        self, windows: np.ndarray, phi_seed: Optional[int] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Predicted classes and class probabilities, in window order"""
        if isinstance(self.model, PackedModel):
            return self.model.infer(windows, phi_seed)
        state = self.model
        fusion = None if phi_seed is None else fusion_weights_for(state, phi_seed)
        logits = forward_eval(windows, state, fusion)
        return np.argmax(logits, axis=1), softmax(logits)
