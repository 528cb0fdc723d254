"""
Formatters for dftn log records.

Ordinary records get a one-line ``timestamp LEVEL [logger] message`` layout;
records carrying per-epoch training metrics are rendered as a compact
metrics line so a training run reads like a table in the log file.
"""

import logging
from datetime import datetime
from typing import Sequence

METRICS_LOGGER = "dftn.metrics"


class DftnFormatter(logging.Formatter):
    """One line per record; the timestamp, thread and PID fields are optional"""

    def __init__(
        self,
        include_timestamps: bool = True,
        include_thread_info: bool = False,
        include_process_info: bool = False,
    ):
        fields = (
            ("%(asctime)s", include_timestamps),
            ("%(levelname)s", True),
            ("[%(name)s]", True),
            ("[Thread:%(thread)d]", include_thread_info),
            ("[PID:%(process)d]", include_process_info),
            ("%(message)s", True),
        )
        super().__init__(
            fmt=" ".join(field for field, wanted in fields if wanted),
            datefmt="%Y-%m-%d %H:%M:%S",
        )


def _format_floats(values: Sequence[float]) -> str:
    return "[" + ", ".join(f"{v:.4g}" for v in values) + "]"


class EpochMetricsFormatter(logging.Formatter):
    """
    Render a record produced by ``log_epoch_metrics``.

    Example:
        2026-02-02 17:27:34 INFO [dftn.metrics] epoch 3 loss=0.4121 f1=0.9375 eps_a=[1, 0.5]
    """

    def format(self, record: logging.LogRecord) -> str:
        timestamp = datetime.fromtimestamp(record.created).strftime("%Y-%m-%d %H:%M:%S")
        epoch = getattr(record, "epoch", "?")
        loss = getattr(record, "train_loss", float("nan"))
        f1 = getattr(record, "val_weighted_f1", float("nan"))
        line = (
            f"{timestamp} {record.levelname} [{record.name}] "
            f"epoch {epoch} loss={loss:.4f} f1={f1:.4f}"
        )
        eps_a = getattr(record, "eps_a", None)
        if eps_a:
            line += f" eps_a={_format_floats(eps_a)}"
        zero_fraction = getattr(record, "zero_fraction", None)
        if zero_fraction:
            line += f" zeros={_format_floats(zero_fraction)}"
        return line


class MultiplexFormatter(logging.Formatter):
    """Use the metrics formatter for epoch records and the default one otherwise"""

    def __init__(self, default_formatter: logging.Formatter, metrics_formatter: logging.Formatter):
        self.default_formatter = default_formatter
        self.metrics_formatter = metrics_formatter
        super().__init__()

    def format(self, record: logging.LogRecord) -> str:
        if record.name == METRICS_LOGGER or hasattr(record, "epoch"):
            return self.metrics_formatter.format(record)
        return self.default_formatter.format(record)
