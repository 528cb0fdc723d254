"""
Main logging module for dftn.

Owns logger setup (daily rotating file plus stderr console) and the
structured helpers used for training metrics and artifact events.
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

from .config import LogConfig, get_log_file_path
from .formatters import METRICS_LOGGER, DftnFormatter, EpochMetricsFormatter, MultiplexFormatter

# Global logger registry
_loggers: Dict[str, logging.Logger] = {}
_logging_configured = False
_is_configuring = False
_log_config: Optional[LogConfig] = None


def _user_settings() -> Dict[str, str]:
    """``[logging]`` section of the user's settings.ini; empty when it cannot be read"""
    try:
        from dftn.utils.config_store import ConfigStore

        return ConfigStore().get_settings("logging")
    except OSError:
        return {}


def _file_handler(config: LogConfig, path: Path) -> logging.Handler:
    """Daily rotation at midnight; epoch records get the metrics layout"""
    handler = logging.handlers.TimedRotatingFileHandler(
        filename=path,
        when="midnight",
        backupCount=config.log_retention_days,
        encoding="utf-8",
    )
    handler.suffix = "%Y-%m-%d"
    handler.setLevel(config.default_level.value)
    handler.setFormatter(
        MultiplexFormatter(
            default_formatter=DftnFormatter(
                include_timestamps=config.include_timestamps,
                include_thread_info=config.include_thread_info,
                include_process_info=config.include_process_info,
            ),
            metrics_formatter=EpochMetricsFormatter(),
        )
    )
    return handler


def _console_handler(config: LogConfig) -> logging.Handler:
    # stdout belongs to rich tables and tqdm bars
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(config.console_level.value)
    handler.setFormatter(DftnFormatter(include_timestamps=False))
    return handler


def setup_logging(config: Optional[LogConfig] = None, force_reconfigure: bool = False) -> None:
    """
    Attach the file and console handlers to the ``dftn`` logger.

    Args:
        config: LogConfig instance; defaults merged with the user's settings when None
        force_reconfigure: Replace handlers installed by an earlier call
    """
    global _logging_configured, _is_configuring, _log_config

    if _is_configuring or (_logging_configured and not force_reconfigure):
        return

    _is_configuring = True
    try:
        config = config or LogConfig().with_settings(_user_settings())
        log_file_path = get_log_file_path(config)

        root_logger = logging.getLogger("dftn")
        root_logger.setLevel(logging.DEBUG)
        for handler in list(root_logger.handlers):
            root_logger.removeHandler(handler)
            handler.close()
        root_logger.addHandler(_file_handler(config, log_file_path))
        root_logger.addHandler(_console_handler(config))

        logging.getLogger(METRICS_LOGGER).setLevel(
            logging.DEBUG if config.log_epoch_metrics else logging.CRITICAL
        )
        _log_config = config
        _logging_configured = True
    finally:
        _is_configuring = False

    get_logger("dftn.setup").debug(
        f"Logging to {log_file_path} at {config.default_level.value}, "
        f"keeping {config.log_retention_days} days"
    )


def get_logger(name: str) -> logging.Logger:
    """Logger ``name``, setting up logging on first use"""
    if not _logging_configured:
        setup_logging()
    return _loggers.setdefault(name, logging.getLogger(name))


def get_log_config() -> LogConfig:
    return _log_config or LogConfig()


def log_epoch_metrics(
    epoch: int,
    train_loss: float,
    val_weighted_f1: float,
    eps_a: Sequence[float] = (),
    zero_fraction: Sequence[float] = (),
    logger_name: str = METRICS_LOGGER,
) -> None:
    """Log one row of the training history at INFO level."""
    logger = get_logger(logger_name)
    extra = {
        "epoch": epoch,
        "train_loss": float(train_loss),
        "val_weighted_f1": float(val_weighted_f1),
        "eps_a": [float(v) for v in eps_a],
        "zero_fraction": [float(v) for v in zero_fraction],
    }
    logger.info(f"Epoch {epoch} finished", extra=extra)


def log_artifact_event(
    action: str,
    path: Union[str, Path],
    size_bytes: Optional[int] = None,
    logger_name: str = "dftn.artifacts",
) -> None:
    """Record that an artifact (model, metrics, checkpoint, ...) was written or read."""
    from .utils import format_size

    logger = get_logger(logger_name)
    message = f"{action}: {path}"
    if size_bytes is not None:
        message += f" ({format_size(size_bytes)})"
    logger.info(message, extra={"artifact_path": str(path), "artifact_action": action})


def log_application_event(
    event: str,
    level: str = "info",
    details: Optional[Dict[str, Any]] = None,
    logger_name: str = "dftn.app",
) -> None:
    """CLI lifecycle event at ``level``; ``details`` are appended as ``key=value`` pairs"""
    details = details or {}
    pairs = " ".join(f"{key}={value}" for key, value in details.items())
    logger = get_logger(logger_name)
    log = getattr(logger, level.lower(), logger.info)
    log(
        f"Application: {event} {pairs}".rstrip(),
        extra={"app_event": event, "app_details": details},
    )
