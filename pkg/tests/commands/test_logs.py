import os
from datetime import datetime, timedelta

import pytest
import typer

from dftn.commands.logs import clean_logs, log_info, show_logs
from dftn.logging.config import LogConfig


def test_show_logs_no_log_file(mocker):
    log_path = mocker.Mock()
    log_path.exists.return_value = False
    mocker.patch("dftn.commands.logs.get_log_file_path", return_value=log_path)
    warning = mocker.patch("dftn.commands.logs.warning")

    show_logs(lines=10, level=None)

    warning.assert_called_once()


def test_show_logs_with_lines(mocker, tmp_path):
    log_file = tmp_path / "dftn.log"
    log_file.write_text("INFO one\nERROR two\nDEBUG three\n", encoding="utf-8")
    mocker.patch("dftn.commands.logs.get_log_file_path", return_value=log_file)
    syntax = mocker.patch("dftn.commands.logs.Syntax")
    console = mocker.patch("dftn.commands.logs.console")

    show_logs(lines=2, level=None)

    console.print.assert_called_once()
    assert syntax.call_args[0][0] == "ERROR two\nDEBUG three\n"


def test_show_logs_with_level_filter(mocker, tmp_path):
    log_file = tmp_path / "dftn.log"
    log_file.write_text("INFO one\nERROR two\nERROR three\n", encoding="utf-8")
    mocker.patch("dftn.commands.logs.get_log_file_path", return_value=log_file)
    syntax = mocker.patch("dftn.commands.logs.Syntax")
    mocker.patch("dftn.commands.logs.console")

    show_logs(lines=10, level="error")

    assert syntax.call_args[0][0] == "ERROR two\nERROR three\n"


def test_show_logs_no_matching_lines(mocker, tmp_path):
    log_file = tmp_path / "dftn.log"
    log_file.write_text("INFO one\nDEBUG two\n", encoding="utf-8")
    mocker.patch("dftn.commands.logs.get_log_file_path", return_value=log_file)
    info = mocker.patch("dftn.commands.logs.info")

    show_logs(lines=10, level="ERROR")

    info.assert_called_once()


def test_show_logs_read_error(mocker, tmp_path):
    logger = mocker.patch("dftn.commands.logs.logger")
    log_file = tmp_path / "dftn.log"
    log_file.mkdir()
    mocker.patch("dftn.commands.logs.get_log_file_path", return_value=log_file)
    error = mocker.patch("dftn.commands.logs.error")

    with pytest.raises(typer.Exit):
        show_logs(lines=10, level=None)

    error.assert_called_once()
    logger.error.assert_called_once()


@pytest.mark.parametrize("with_file", [True, False])
def test_log_info(mocker, tmp_path, with_file):
    log_file = tmp_path / "dftn.log"
    if with_file:
        log_file.write_text("hello", encoding="utf-8")
    mocker.patch("dftn.commands.logs.get_log_config", return_value=LogConfig())
    mocker.patch("dftn.commands.logs.get_log_directory", return_value=tmp_path)
    mocker.patch("dftn.commands.logs.get_log_file_path", return_value=log_file)
    console = mocker.patch("dftn.commands.logs.console")

    log_info()

    console.print.assert_called_once()
    table = console.print.call_args[0][0]
    assert table.row_count == (9 if with_file else 8)


def test_clean_logs_uses_retention_by_default(mocker, tmp_path):
    old = tmp_path / "dftn.log.2026-01-01"
    old.write_text("x")
    stamp = (datetime.now() - timedelta(days=10)).timestamp()
    os.utime(old, (stamp, stamp))
    mocker.patch("dftn.commands.logs.get_log_config", return_value=LogConfig())
    mocker.patch("dftn.commands.logs.get_log_directory", return_value=tmp_path)
    success = mocker.patch("dftn.commands.logs.success")

    clean_logs(days=None)

    assert not old.exists()
    success.assert_called_once_with("Removed 1 rotated log file(s)")


def test_clean_logs_rejects_negative_days(mocker):
    error = mocker.patch("dftn.commands.logs.error")

    with pytest.raises(typer.Exit) as exc:
        clean_logs(days=-1)

    assert exc.value.exit_code == 2
    error.assert_called_once()
