"""
Seeded synthetic activity windows for desk-scale experiments.

Every informative branch channel carries a sinusoid whose frequency depends
on the class (``1.5 + 1.5 g`` cycles per window) plus a per-(class, channel)
offset. Muted branches carry a sinusoid at a class-independent random
frequency and no offsets, so they hold no class information.
"""

from typing import Iterable, Sequence, Tuple

import numpy as np

from dftn.constants import (
    DEFAULT_WINDOW_T,
    SYNTH_BRANCHES,
    SYNTH_CLASSES,
    SYNTH_NOISE,
    SYNTH_SAMPLE_RATE,
    SYNTH_WINDOWS_PER_CLASS,
)
from dftn.errors import ParameterError

from .dataset import BranchRange, WindowDataset

BASE_CYCLES = 1.5
CYCLES_PER_CLASS = 1.5


def branch_ranges(branches: Sequence[Tuple[str, int]]) -> Tuple[BranchRange, ...]:
    """Turn ``(name, channel count)`` pairs into contiguous ``(name, start, stop)`` spans"""
    ranges = []
    start = 0
    for name, count in branches:
        if count < 1:
            raise ParameterError(f"branch '{name}' needs at least one channel")
        ranges.append((name, start, start + count))
        start += count
    return tuple(ranges)


def synth_dataset(
    classes: int = SYNTH_CLASSES,
    branches: Sequence[Tuple[str, int]] = SYNTH_BRANCHES,
    windows_per_class: int = SYNTH_WINDOWS_PER_CLASS,
    seed: int = 0,
    window_t: int = DEFAULT_WINDOW_T,
    noise: float = SYNTH_NOISE,
    muted: Iterable[str] = (),
    sample_rate: float = SYNTH_SAMPLE_RATE,
) -> WindowDataset:
    """
    Balanced ``classes``-way dataset of ``[T, S]`` windows in shuffled order.

    Args:
        muted: Branch names generated without class information
    """
    if classes < 2:
        raise ParameterError(f"need at least 2 classes, got {classes}")
    if windows_per_class < 1 or window_t < 2:
        raise ParameterError("windows_per_class and window_t must be positive")
    if noise < 0:
        raise ParameterError("noise amplitude must be nonnegative")
    ranges = branch_ranges(branches)
    muted = set(muted)
    unknown = muted - {name for name, _, _ in ranges}
    if unknown:
        raise ParameterError(f"unknown muted branches: {sorted(unknown)}")

    rng = np.random.default_rng(seed)
    channels = ranges[-1][2]
    informative = np.ones(channels, dtype=bool)
    for name, start, stop in ranges:
        if name in muted:
            informative[start:stop] = False

    total = classes * windows_per_class
    labels = np.repeat(np.arange(classes), windows_per_class)
    offsets = rng.normal(0.0, 1.0, size=(classes, channels))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(total, channels))
    nuisance = rng.integers(0, classes, size=(total, channels))

    cycles = np.where(informative[None, :], labels[:, None], nuisance)
    frequency = BASE_CYCLES + CYCLES_PER_CLASS * cycles
    t = np.arange(window_t) / window_t
    signal = np.sin(2.0 * np.pi * frequency[:, None, :] * t[None, :, None] + phases[:, None, :])
    signal += np.where(informative, offsets[labels], 0.0)[:, None, :]
    signal += noise * rng.normal(0.0, 1.0, size=signal.shape)

    order = rng.permutation(total)
    return WindowDataset(
        windows=signal[order].astype(np.float32),
        labels=labels[order].astype(np.int64),
        branch_ranges=ranges,
        num_classes=classes,
        sample_rate=sample_rate,
    )
