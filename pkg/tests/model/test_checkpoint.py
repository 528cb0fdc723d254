import numpy as np
import pytest

from dftn.errors import FormatError
from dftn.model import TrainingConfig, forward_eval, load_checkpoint, save_checkpoint, train


def test_roundtrip(make_state, tiny_dataset, tmp_path):
    state, _ = train(tiny_dataset, make_state(), TrainingConfig(epochs=1, seed=1))
    path = tmp_path / "state.npz"
    save_checkpoint(state, path)
    loaded = load_checkpoint(path)

    assert loaded.epoch == 1
    assert loaded.network == state.network
    assert loaded.fusion == state.fusion
    assert loaded.quant.epsilon_a == state.quant.epsilon_a
    for name in state.params:
        np.testing.assert_array_equal(loaded.params[name], state.params[name])
        np.testing.assert_array_equal(loaded.accum_grad[name], state.accum_grad[name])
    np.testing.assert_array_equal(
        forward_eval(tiny_dataset.windows, loaded), forward_eval(tiny_dataset.windows, state)
    )


def test_batch_norm_follows_loaded_parameters(make_state, tmp_path):
    path = tmp_path / "state.npz"
    save_checkpoint(make_state(), path)
    loaded = load_checkpoint(path)
    loaded.params["bn_fc.gamma"][:] = 2.0
    assert np.all(loaded.bn["bn_fc"].gamma == 2.0)


def test_full_precision_flag_survives(make_state, tmp_path):
    path = tmp_path / "state.npz"
    save_checkpoint(make_state(enabled=False), path)
    assert load_checkpoint(path).quant.enabled is False


def test_unreadable_checkpoint(tmp_path):
    path = tmp_path / "broken.npz"
    path.write_bytes(b"not an archive")
    with pytest.raises(FormatError):
        load_checkpoint(path)
