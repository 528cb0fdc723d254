import logging

import pytest

from dftn.logging import (
    get_logger,
    log_application_event,
    log_artifact_event,
    log_epoch_metrics,
    setup_logging,
)


def _fake_file_handler(*args, **kwargs):
    handler = logging.NullHandler()
    handler.setLevel(logging.DEBUG)
    return handler


def _fake_stream_handler(*args, **kwargs):
    handler = logging.NullHandler()
    handler.setLevel(logging.WARNING)
    return handler


@pytest.fixture
def quiet_logging(mocker, tmp_path):
    mocker.patch("dftn.logging.logger.get_log_file_path", return_value=tmp_path / "dftn.log")
    mocker.patch("logging.handlers.TimedRotatingFileHandler", side_effect=_fake_file_handler)
    mocker.patch("logging.StreamHandler", side_effect=_fake_stream_handler)
    mocker.patch("dftn.logging.logger._user_settings", return_value={})
    setup_logging(force_reconfigure=True)


def test_setup_logging_basic(quiet_logging):
    root_logger = logging.getLogger("dftn")

    assert len(root_logger.handlers) == 2


def test_get_logger_returns_same_instance(quiet_logging):
    assert get_logger("dftn.test") is get_logger("dftn.test")


def test_log_epoch_metrics_attaches_row(quiet_logging, mocker):
    spy = mocker.spy(logging.getLogger("dftn.metrics"), "info")

    log_epoch_metrics(2, 0.5, 0.75, eps_a=[1.0, 0.5], zero_fraction=[0.3])

    spy.assert_called_once()
    _, kwargs = spy.call_args
    assert kwargs["extra"]["epoch"] == 2
    assert kwargs["extra"]["val_weighted_f1"] == 0.75
    assert kwargs["extra"]["eps_a"] == [1.0, 0.5]


def test_log_artifact_event_includes_size(quiet_logging, mocker, tmp_path):
    spy = mocker.spy(logging.getLogger("dftn.artifacts"), "info")

    log_artifact_event("Wrote model", tmp_path / "model.dftn", size_bytes=2048)

    args, kwargs = spy.call_args
    assert "(2.0KB)" in args[0]
    assert kwargs["extra"]["artifact_action"] == "Wrote model"


def test_log_application_event_info(quiet_logging, mocker):
    spy = mocker.spy(logging.getLogger("dftn.app"), "info")

    log_application_event("startup", details={"seed": 0})

    spy.assert_called_once()
    assert "seed=0" in spy.call_args[0][0]


def test_log_application_event_custom_level(quiet_logging, mocker):
    spy = mocker.spy(logging.getLogger("dftn.app"), "error")

    log_application_event("bad", level="error")

    spy.assert_called_once()


def test_setup_logging_applies_user_settings(mocker, tmp_path):
    mocker.patch("dftn.logging.logger.get_log_file_path", return_value=tmp_path / "dftn.log")
    file_handler = mocker.patch(
        "logging.handlers.TimedRotatingFileHandler", side_effect=_fake_file_handler
    )
    mocker.patch("logging.StreamHandler", side_effect=_fake_stream_handler)
    mocker.patch(
        "dftn.logging.logger._user_settings",
        return_value={"log_level": "INFO", "retention_days": "3"},
    )

    setup_logging(force_reconfigure=True)

    assert file_handler.call_args.kwargs["backupCount"] == 3
    assert logging.getLogger("dftn").handlers[0].level == logging.INFO
