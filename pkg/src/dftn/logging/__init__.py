"""
dftn logging.

Single log file with daily rotation in a platform log directory, a stderr
console handler for warnings, and structured helpers for epoch metrics and
artifact events.
"""

from .config import LogConfig, LogLevel, get_log_directory, get_log_file_path
from .logger import (
    get_log_config,
    get_logger,
    log_application_event,
    log_artifact_event,
    log_epoch_metrics,
    setup_logging,
)
from .utils import cleanup_old_logs, format_size, rotated_logs

__all__ = [
    "get_logger",
    "get_log_config",
    "setup_logging",
    "log_epoch_metrics",
    "log_artifact_event",
    "log_application_event",
    "LogLevel",
    "LogConfig",
    "get_log_directory",
    "get_log_file_path",
    "cleanup_old_logs",
    "format_size",
    "rotated_logs",
]
