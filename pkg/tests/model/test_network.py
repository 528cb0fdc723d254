import pytest

from dftn.errors import ConfigurationError
from dftn.fusion import build_fusion_spec
from dftn.model import (
    NetworkConfig,
    activation_layer_names,
    feature_dims,
    layer_summary,
    weight_layer_names,
)

RANGES = [("hand", 0, 4), ("back", 4, 8), ("ankle", 8, 12)]


def test_default_time_lengths():
    network = NetworkConfig(num_classes=5)
    assert network.time_lengths() == [(54, 27), (18, 6), (1, 1)]
    assert network.feature_length() == 1
    assert network.feature_dim(4) == 4 * 30


def test_short_window_rejected():
    with pytest.raises(ConfigurationError):
        NetworkConfig(num_classes=2, window_t=20)


def test_mismatched_block_lists():
    with pytest.raises(ConfigurationError):
        NetworkConfig(num_classes=2, kernels=(3, 3))


def test_needs_two_classes():
    with pytest.raises(ConfigurationError):
        NetworkConfig(num_classes=1)


def test_layer_names_follow_stacks():
    network = NetworkConfig(num_classes=3)
    late = build_fusion_spec("late", RANGES)
    names = weight_layer_names(network, late)
    assert names[:3] == ["hand.conv1", "hand.conv2", "hand.conv3"]
    assert names[-2:] == ["fc", "out"]
    assert len(names) == 3 * 3 + 2
    assert activation_layer_names(network, late)[-1] == "fc"

    early = build_fusion_spec("early", RANGES)
    names = weight_layer_names(network, early)
    assert names == ["all.conv1", "all.conv2", "all.conv3", "fc", "out"]
    assert feature_dims(network, early) == [12 * 30]
    assert feature_dims(network, late) == [4 * 30] * 3


def test_packed_weights_are_an_order_smaller():
    rows = layer_summary(NetworkConfig(num_classes=18), sensor_channels=113)
    by_name = {row.name: row for row in rows}
    assert by_name["fc"].weight_shape == (113 * 30, 1000)
    assert by_name["fc"].compression >= 10
    total_dense = sum(row.dense_bytes for row in rows)
    total_packed = sum(row.packed_bytes for row in rows)
    assert total_dense / total_packed >= 10
