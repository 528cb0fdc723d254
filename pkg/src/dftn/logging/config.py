"""
Where dftn writes its log and how much it writes.

The log lives in the platform's per-user data directory unless
``DFTN_LOG_DIR`` points elsewhere. When the directory cannot be created the
log falls back to ``./logs``.
"""

import os
import platform
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dftn.constants import LOG_DIR_ENV, LOG_FILE_NAME, LOG_RETENTION_DAYS


class LogLevel(Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"

    @classmethod
    def parse(cls, text: Optional[str]) -> Optional["LogLevel"]:
        """Level named by ``text`` in any case; None for empty or unknown names"""
        if not text:
            return None
        try:
            return cls(text.strip().upper())
        except ValueError:
            return None


@dataclass
class LogConfig:
    """What the file and console handlers record"""

    log_filename: str = f"{LOG_FILE_NAME}.log"
    log_retention_days: int = LOG_RETENTION_DAYS
    default_level: LogLevel = LogLevel.DEBUG
    console_level: LogLevel = LogLevel.WARNING
    include_timestamps: bool = True
    include_thread_info: bool = False
    include_process_info: bool = False
    # per-epoch rows written by the trainer
    log_epoch_metrics: bool = True

    def with_settings(self, settings: Mapping[str, str]) -> "LogConfig":
        """
        Apply the ``[logging]`` section of the user's ``settings.ini``.

        Recognized keys are ``log_level``, ``console_level`` and
        ``retention_days``; values that do not parse are ignored.
        """
        changes: Dict[str, Any] = {}
        level = LogLevel.parse(settings.get("log_level"))
        if level is not None:
            changes["default_level"] = level
        console = LogLevel.parse(settings.get("console_level"))
        if console is not None:
            changes["console_level"] = console
        retention = settings.get("retention_days", "").strip()
        if retention.isdigit():
            changes["log_retention_days"] = int(retention)
        return replace(self, **changes)


def _platform_log_dir() -> Path:
    system = platform.system().lower()
    if system == "darwin":
        return Path.home() / "Library" / "Logs" / LOG_FILE_NAME
    if system == "windows":
        appdata = os.environ.get("APPDATA")
        base = Path(appdata) if appdata else Path.home()
    else:
        xdg_data_home = os.environ.get("XDG_DATA_HOME")
        base = Path(xdg_data_home) if xdg_data_home else Path.home() / ".local" / "share"
    return base / LOG_FILE_NAME / "logs"


def get_log_directory() -> Path:
    """
    Directory of the active log and its rotations, created on demand.

    Returns:
        Path: ``$DFTN_LOG_DIR``, else the platform directory, else ``./logs``
    """
    override = os.environ.get(LOG_DIR_ENV)
    log_dir = Path(override) if override else _platform_log_dir()
    try:
        log_dir.mkdir(parents=True, exist_ok=True)
    except OSError:
        log_dir = Path.cwd() / "logs"
        log_dir.mkdir(exist_ok=True)
    return log_dir


def get_log_file_path(config: Optional[LogConfig] = None) -> Path:
    return get_log_directory() / (config or LogConfig()).log_filename
