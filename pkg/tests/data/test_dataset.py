import numpy as np
import pytest

from dftn.data import (
    LabeledStream,
    WindowDataset,
    majority_labels,
    segment_windows,
    synth_dataset,
    train_validation_split,
)
from dftn.errors import ConfigurationError, DimensionError, ParameterError


def _stream(length, labels=None, channels=2):
    values = np.arange(length * channels, dtype=np.float32).reshape(length, channels)
    if labels is None:
        labels = np.zeros(length, dtype=np.int64)
    return LabeledStream(
        values=values,
        labels=np.asarray(labels, dtype=np.int64),
        branch_ranges=(("a", 0, channels),),
        sample_rate=30.0,
    )


def test_window_starts():
    dataset = segment_windows(_stream(70), window_t=64, stride=3)
    assert len(dataset) == 3
    assert dataset.windows.shape == (3, 64, 2)
    assert [w[0, 0] for w in dataset.windows] == [0.0, 6.0, 12.0]


def test_uniform_labels():
    dataset = segment_windows(_stream(30, np.full(30, 2)), window_t=8, stride=4, num_classes=3)
    assert set(dataset.labels.tolist()) == {2}


def test_majority_label():
    labels = np.array([0] * 33 + [1] * 31)
    assert majority_labels(labels, np.array([0]), 64, 2).tolist() == [0]


def test_majority_tie_goes_to_smallest_class():
    labels = np.array([1, 1, 0, 0])
    assert majority_labels(labels, np.array([0]), 4, 2).tolist() == [0]


def test_short_stream_gives_empty_dataset():
    dataset = segment_windows(_stream(10), window_t=64, stride=3)
    assert len(dataset) == 0
    assert dataset.windows.shape == (0, 64, 2)


def test_segment_rejects_bad_window():
    with pytest.raises(ParameterError):
        segment_windows(_stream(10), window_t=0)


def test_dataset_invariants():
    with pytest.raises(DimensionError):
        WindowDataset(np.zeros((2, 4)), np.zeros(2, np.int64), (), 2, 30.0)
    with pytest.raises(ParameterError):
        WindowDataset(np.zeros((2, 4, 1)), np.array([0, 2]), (), 2, 30.0)


def test_class_proportions_sum_to_one():
    dataset = synth_dataset(classes=3, branches=(("a", 1),), windows_per_class=5, window_t=8)
    assert abs(dataset.class_proportions.sum() - 1.0) < 1e-9
    assert dataset.class_names == ["0", "1", "2"]


def test_stratified_split():
    dataset = synth_dataset(classes=2, branches=(("a", 1),), windows_per_class=10, window_t=8)
    train, validation = train_validation_split(dataset, 0.2, seed=3)
    assert len(train) == 16
    assert validation.class_counts.tolist() == [2, 2]
    again, _ = train_validation_split(dataset, 0.2, seed=3)
    np.testing.assert_array_equal(train.windows, again.windows)


def test_split_validation():
    dataset = synth_dataset(classes=2, branches=(("a", 1),), windows_per_class=2, window_t=8)
    with pytest.raises(ParameterError):
        train_validation_split(dataset, 1.0, seed=0)
    with pytest.raises(ConfigurationError):
        train_validation_split(dataset.subset([]), 0.5, seed=0)
