"""
Labeled sensor streams and the sliding-window datasets cut from them.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from dftn.constants import DEFAULT_STRIDE, DEFAULT_WINDOW_T
from dftn.errors import ConfigurationError, DimensionError, ParameterError
from dftn.logging import get_logger

logger = get_logger("dftn.data")

BranchRange = Tuple[str, int, int]


@dataclass
class LabeledStream:
    """``values [L, S]`` with one integer label per timestamp"""

    values: np.ndarray
    labels: np.ndarray
    branch_ranges: Tuple[BranchRange, ...]
    sample_rate: float
    label_values: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.values.ndim != 2:
            raise DimensionError(f"stream values must be [L, S], got shape {self.values.shape}")
        if self.labels.shape != (self.values.shape[0],):
            raise DimensionError(
                f"expected {self.values.shape[0]} labels, got shape {self.labels.shape}"
            )

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def sensor_channels(self) -> int:
        return self.values.shape[1]


@dataclass
class WindowDataset:
    """
    Segmented windows ``[N, T, S]`` with majority labels.

    ``label_values`` maps class index ``g`` back to the label found in the raw
    stream; class names for display are derived from it.
    """

    windows: np.ndarray
    labels: np.ndarray
    branch_ranges: Tuple[BranchRange, ...]
    num_classes: int
    sample_rate: float
    label_values: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.windows.ndim != 3:
            raise DimensionError(f"windows must be [N, T, S], got shape {self.windows.shape}")
        if self.labels.shape != (self.windows.shape[0],):
            raise DimensionError("one label per window is required")
        if self.num_classes < 1:
            raise ParameterError("num_classes must be positive")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise ParameterError(f"labels must lie in [0, {self.num_classes})")
        if not self.label_values:
            self.label_values = list(range(self.num_classes))

    def __len__(self) -> int:
        return self.windows.shape[0]

    @property
    def window_t(self) -> int:
        return self.windows.shape[1]

    @property
    def sensor_channels(self) -> int:
        return self.windows.shape[2]

    @property
    def class_names(self) -> List[str]:
        return [str(value) for value in self.label_values]

    @property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    @property
    def class_proportions(self) -> np.ndarray:
        """``w_g = N_g / N_total``"""
        if len(self) == 0:
            return np.zeros(self.num_classes)
        return self.class_counts / len(self)

    def subset(self, indices: Sequence[int]) -> "WindowDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return WindowDataset(
            windows=self.windows[indices],
            labels=self.labels[indices],
            branch_ranges=self.branch_ranges,
            num_classes=self.num_classes,
            sample_rate=self.sample_rate,
            label_values=list(self.label_values),
        )


def majority_labels(
    labels: np.ndarray, starts: np.ndarray, window_t: int, num_classes: int
) -> np.ndarray:
    """Modal label of every window; ties go to the smallest class index"""
    onehot = np.zeros((len(labels) + 1, num_classes), dtype=np.int64)
    onehot[np.arange(1, len(labels) + 1), labels] = 1
    cumulative = np.cumsum(onehot, axis=0)
    counts = cumulative[starts + window_t] - cumulative[starts]
    return np.argmax(counts, axis=1)


def segment_windows(
    stream: LabeledStream,
    window_t: int = DEFAULT_WINDOW_T,
    stride: int = DEFAULT_STRIDE,
    num_classes: Optional[int] = None,
) -> WindowDataset:
    """
    Cut windows starting at ``0, stride, 2*stride, ...``.

    A stream shorter than ``window_t`` gives an empty dataset and a warning.
    """
    if window_t < 1 or stride < 1:
        raise ParameterError(f"window length and stride must be positive, got {window_t}, {stride}")
    labels = np.asarray(stream.labels, dtype=np.int64)
    if len(labels) and labels.min() < 0:
        raise ParameterError("stream labels must be encoded as class indices >= 0")
    if num_classes is None:
        num_classes = max(len(stream.label_values), int(labels.max()) + 1 if len(labels) else 1)

    length, channels = stream.values.shape
    if length < window_t:
        logger.warning(f"Stream of {length} samples is shorter than the window length {window_t}")
        return WindowDataset(
            windows=np.zeros((0, window_t, channels), dtype=np.float32),
            labels=np.zeros(0, dtype=np.int64),
            branch_ranges=stream.branch_ranges,
            num_classes=num_classes,
            sample_rate=stream.sample_rate,
            label_values=list(stream.label_values),
        )

    starts = np.arange(0, length - window_t + 1, stride)
    views = sliding_window_view(stream.values, window_t, axis=0)[starts]
    windows = np.ascontiguousarray(views.transpose(0, 2, 1), dtype=np.float32)
    return WindowDataset(
        windows=windows,
        labels=majority_labels(labels, starts, window_t, num_classes),
        branch_ranges=stream.branch_ranges,
        num_classes=num_classes,
        sample_rate=stream.sample_rate,
        label_values=list(stream.label_values),
    )


def train_validation_split(
    dataset: WindowDataset, fraction: float, seed: int
) -> Tuple[WindowDataset, WindowDataset]:
    """
    Seeded stratified split; every class keeps ``round(fraction * N_g)`` windows for validation.

    Both halves keep the original window order.
    """
    if not 0.0 < fraction < 1.0:
        raise ParameterError(f"validation fraction must lie in (0, 1), got {fraction}")
    if len(dataset) == 0:
        raise ConfigurationError("cannot split an empty dataset")
    rng = np.random.default_rng(seed)
    validation: List[np.ndarray] = []
    for g in range(dataset.num_classes):
        members = np.flatnonzero(dataset.labels == g)
        if len(members) == 0:
            continue
        take = int(np.floor(fraction * len(members) + 0.5))
        validation.append(rng.permutation(members)[:take])
    val_index = np.sort(np.concatenate(validation)) if validation else np.zeros(0, np.int64)
    mask = np.ones(len(dataset), dtype=bool)
    mask[val_index] = False
    return dataset.subset(np.flatnonzero(mask)), dataset.subset(val_index)
