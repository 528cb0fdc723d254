import os

import pytest

from dftn.utils.config_store import ConfigStore


@pytest.fixture
def temp_config_dir(tmp_path, mocker):
    mocker.patch("platform.system", return_value="Linux")
    mocker.patch.dict(os.environ, {"XDG_CONFIG_HOME": str(tmp_path)})
    return tmp_path


@pytest.fixture
def store(temp_config_dir):
    return ConfigStore()


def test_get_config_dir_linux_xdg(temp_config_dir):
    store = ConfigStore()
    assert store.base_dir == temp_config_dir / "dftn"
    assert store.base_dir.is_dir()


def test_get_config_dir_linux_fallback(tmp_path, mocker):
    mocker.patch("platform.system", return_value="Linux")
    mocker.patch.dict(os.environ, {}, clear=True)
    mocker.patch("pathlib.Path.home", return_value=tmp_path)

    assert ConfigStore().base_dir == tmp_path / ".dftn"


def test_get_config_dir_windows(tmp_path, mocker):
    mocker.patch("platform.system", return_value="Windows")
    mocker.patch.dict(os.environ, {"APPDATA": str(tmp_path)})

    assert ConfigStore().base_dir == tmp_path / "dftn"


def test_get_config_dir_macos(tmp_path, mocker):
    mocker.patch("platform.system", return_value="Darwin")
    mocker.patch("pathlib.Path.home", return_value=tmp_path)

    assert ConfigStore().base_dir == tmp_path / "Library" / "Application Support" / "dftn"


def test_explicit_base_dir(tmp_path):
    store = ConfigStore(base_dir=tmp_path / "custom")
    assert store.settings_file == tmp_path / "custom" / "settings.ini"


def test_set_and_get_setting(store):
    store.set_setting("logging", "log_level", "INFO")

    assert store.get_setting("logging", "log_level") == "INFO"
    assert store.get_settings("logging") == {"log_level": "INFO"}


def test_get_setting_missing_returns_default(store):
    assert store.get_setting("logging", "log_level", default="DEBUG") == "DEBUG"
    assert store.get_settings("nope") == {}


def test_corrupted_settings_file_reads_empty(store):
    store.settings_file.write_text("[logging\nlog_level=INFO")

    assert store.get_settings("logging") == {}
