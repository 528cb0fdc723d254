import dataclasses
import struct

import numpy as np
import pytest

from dftn.bitpack import TernaryTensor
from dftn.constants import DFTN_FORMAT_VERSION
from dftn.errors import ConfigurationError, DimensionError, FormatError
from dftn.fusion import build_fusion_spec
from dftn.model import (
    LayerKind,
    NetworkConfig,
    PackedModel,
    TrainingConfig,
    TrainState,
    export_packed,
    infer_packed,
    train,
)
from dftn.quantize import QuantConfig


@pytest.fixture
def trained(make_state, tiny_dataset):
    state, _ = train(tiny_dataset, make_state(), TrainingConfig(epochs=2, batch_size=16, seed=1))
    return state


def test_roundtrip_inference_is_bit_identical(trained, rng):
    windows = rng.normal(size=(100, 24, 4)).astype(np.float32)
    in_memory = PackedModel.from_state(trained).logits(windows)
    loaded = PackedModel.from_bytes(export_packed(trained)).logits(windows)
    np.testing.assert_array_equal(in_memory, loaded)


def test_layer_layout(trained):
    model = PackedModel.from_bytes(export_packed(trained))
    kinds = [layer.kind for layer in model.layers]
    assert kinds.count(LayerKind.INPUT_CONV) == 2
    assert kinds.count(LayerKind.PACKED_CONV) == 4
    assert kinds[-2:] == [LayerKind.HIDDEN_DENSE, LayerKind.OUTPUT_DENSE]
    assert model.layer_names()[:3] == ["hand.conv1", "hand.conv2", "hand.conv3"]
    assert model.layer_names()[-2:] == ["fc", "out"]
    assert model.fusion.branches == trained.fusion.branches


def test_predictions_keep_window_order(trained, tiny_dataset):
    model = PackedModel.from_state(trained)
    predictions, probabilities = model.infer(tiny_dataset.windows)
    assert predictions.shape == (len(tiny_dataset),)
    np.testing.assert_allclose(probabilities.sum(axis=1), 1.0, rtol=1e-5)
    single = [model.infer(tiny_dataset.windows[i : i + 1])[0][0] for i in range(5)]
    assert single == predictions[:5].tolist()


def test_zero_window_is_deterministic(trained):
    zeros = np.zeros((3, 24, 4), dtype=np.float32)
    predictions, _ = infer_packed(export_packed(trained), zeros)
    assert len(set(predictions.tolist())) == 1
    again, _ = infer_packed(export_packed(trained), zeros)
    np.testing.assert_array_equal(predictions, again)


def test_dynamic_fusion_masks_follow_seed(make_state, tiny_dataset, dynamic_fusion):
    state, _ = train(
        tiny_dataset, make_state(fusion=dynamic_fusion), TrainingConfig(epochs=1, seed=1)
    )
    model = PackedModel.from_bytes(export_packed(state))
    assert model.fusion.phi_seed == 11
    assert model.fusion.reduced_names() == ["back"]
    first = model.logits(tiny_dataset.windows)
    np.testing.assert_array_equal(first, model.logits(tiny_dataset.windows, phi_seed=11))


def test_file_is_an_order_smaller_than_dense():
    state = TrainState.create(
        NetworkConfig(num_classes=4),
        build_fusion_spec("late", [("hand", 0, 4), ("back", 4, 8), ("ankle", 8, 12)]),
        QuantConfig(),
    )
    dense_bytes = 4 * sum(
        value.size for name, value in state.params.items() if name.endswith(".weight")
    )
    assert len(export_packed(state)) * 10 <= dense_bytes


def test_full_precision_cannot_be_exported(make_state):
    with pytest.raises(ConfigurationError):
        export_packed(make_state(enabled=False))


def test_empty_model_rejected(trained):
    model = PackedModel.from_state(trained)
    model.layers = []
    with pytest.raises(FormatError):
        model.to_bytes()


def test_version_mismatch(trained):
    data = bytearray(export_packed(trained))
    data[4:6] = struct.pack("<H", DFTN_FORMAT_VERSION + 1)
    with pytest.raises(FormatError):
        infer_packed(bytes(data), np.zeros((1, 24, 4), dtype=np.float32))


def test_bad_magic_and_truncation(trained):
    data = export_packed(trained)
    with pytest.raises(FormatError):
        PackedModel.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(FormatError):
        PackedModel.from_bytes(data[:-3])
    with pytest.raises(FormatError):
        PackedModel.from_bytes(data + b"\x00")


def test_window_shape_checked(trained):
    with pytest.raises(DimensionError):
        PackedModel.from_state(trained).infer(np.zeros((1, 20, 4), dtype=np.float32))


def test_long_branch_name_is_a_configuration_error(make_state):
    fusion = build_fusion_spec("late", [("h" * 300, 0, 2), ("back", 2, 4)])

    with pytest.raises(ConfigurationError, match="longer than 255 bytes"):
        PackedModel.from_state(make_state(fusion=fusion))


def test_oversized_pool_is_a_configuration_error(trained):
    model = PackedModel.from_state(trained)
    model.layers[0] = dataclasses.replace(model.layers[0], pool=300)

    with pytest.raises(ConfigurationError, match="must not exceed 255"):
        model.to_bytes()


def _replace_planes(model, index, sign, value):
    weights = model.layers[index].weights
    tampered = TernaryTensor(weights.shape, sign, value, weights.alpha)
    model.layers[index] = dataclasses.replace(model.layers[index], weights=tampered)


def test_padding_bits_are_rejected(trained):
    model = PackedModel.from_state(trained)
    index = next(i for i, layer in enumerate(model.layers) if layer.weights.size % 64)
    weights = model.layers[index].weights
    high = np.uint64(1) << np.uint64(63)
    sign, value = weights.sign_plane.copy(), weights.value_plane.copy()
    sign[-1] |= high
    value[-1] |= high
    _replace_planes(model, index, sign, value)

    with pytest.raises(FormatError, match="padding bits"):
        PackedModel.from_bytes(model.to_bytes())


def test_sign_bit_of_zero_weight_is_rejected(trained):
    model = PackedModel.from_state(trained)
    index, zero = next(
        (i, int(np.flatnonzero(~layer.weights.value_bits().ravel())[0]))
        for i, layer in enumerate(model.layers)
        if not layer.weights.value_bits().all()
    )
    weights = model.layers[index].weights
    sign = weights.sign_plane.copy()
    sign[zero // 64] |= np.uint64(1) << np.uint64(zero % 64)
    _replace_planes(model, index, sign, weights.value_plane.copy())

    with pytest.raises(FormatError, match="signs of zero weights"):
        PackedModel.from_bytes(model.to_bytes())
