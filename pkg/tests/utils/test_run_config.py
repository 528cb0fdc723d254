import configparser

import pytest

from dftn.errors import ConfigurationError, UsageError
from dftn.fusion.spec import FusionMode
from dftn.utils.run_config import (
    RunConfig,
    resolve_run_config,
    to_sections,
    write_run_config,
)


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[quant]\nxi = 3.5\nk_a = 3\n\n"
        "[training]\nepochs = 7\nseed = 4\n\n"
        "[fusion]\nmode = dynamic\nreduced = periodic\n"
    )
    return path


def test_defaults():
    config = resolve_run_config()

    assert config.quant.xi == 2.8
    assert config.quant.k_w == 2
    assert config.training.epochs == 50
    assert config.training.batch_size == 1024
    assert config.fusion.mode == FusionMode.LATE.value
    assert config.fusion.phi_seed == 0


def test_file_overrides_defaults(config_file):
    config = resolve_run_config(config_file)

    assert config.quant.xi == 3.5
    assert config.quant.k_a == 3
    assert config.training.epochs == 7
    assert config.fusion.reduced == ["periodic"]


def test_flags_override_file(config_file):
    config = resolve_run_config(
        config_file, {"quant.xi": 1.5, "training.epochs": None, "network.kernels": (5, 5, 3)}
    )

    assert config.quant.xi == 1.5
    assert config.training.epochs == 7
    assert config.network.kernels == (5, 5, 3)


def test_unknown_key_in_file_is_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[quant]\nbits = 2\n")

    with pytest.raises(ConfigurationError, match="unknown key 'bits'"):
        resolve_run_config(path)


def test_unknown_section_in_file_is_rejected(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[model]\nepochs = 2\n")

    with pytest.raises(ConfigurationError, match="unknown section"):
        resolve_run_config(path)


def test_unknown_override_is_rejected():
    with pytest.raises(ConfigurationError, match="unknown setting"):
        resolve_run_config(overrides={"quant.bits": 2})


def test_unparsable_value_names_the_key(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[training]\nepochs = many\n")

    with pytest.raises(ConfigurationError, match=r"\[training\] epochs"):
        resolve_run_config(path)


def test_out_of_range_values_become_configuration_errors():
    with pytest.raises(ConfigurationError):
        resolve_run_config(overrides={"quant.xi": -1.0})
    with pytest.raises(ConfigurationError):
        resolve_run_config(overrides={"fusion.phi_seed": 2**32})
    with pytest.raises(ConfigurationError):
        resolve_run_config(overrides={"fusion.mode": "middle"})
    with pytest.raises(ConfigurationError):
        resolve_run_config(overrides={"output.xi_sweep": [1.0, 0.0]})


def test_missing_config_file_is_a_usage_error(tmp_path):
    with pytest.raises(UsageError):
        resolve_run_config(tmp_path / "absent.ini")


def test_snapshot_reproduces_config(tmp_path, config_file):
    config = resolve_run_config(config_file, {"output.xi_sweep": [2.0, 2.8]})
    snapshot = tmp_path / "resolved_config.ini"

    write_run_config(config, snapshot)
    reloaded = resolve_run_config(snapshot)

    assert to_sections(reloaded) == to_sections(config)
    parser = configparser.ConfigParser(interpolation=None)
    parser.read(snapshot)
    assert parser.get("quant", "xi") == "3.5"


def test_dataset_source_checks():
    config = RunConfig()
    with pytest.raises(UsageError, match="dataset is required"):
        config.check_dataset_source()

    config.dataset.synth = True
    config.dataset.csv = "data.csv"
    with pytest.raises(UsageError, match="mutually exclusive"):
        config.check_dataset_source()

    config.dataset.synth = False
    with pytest.raises(UsageError, match="--schema"):
        config.check_dataset_source()

    config.dataset.schema = "pamap2"
    config.check_dataset_source()


def test_build_fusion_expands_preset(config_file):
    config = resolve_run_config(config_file)

    spec = config.build_fusion([("hand", 0, 3), ("back", 3, 6), ("ankle", 6, 9)])

    assert [b.reduced for b in spec.branches] == [False, True, False]
