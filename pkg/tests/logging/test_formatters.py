import logging

from dftn.logging.formatters import (
    METRICS_LOGGER,
    DftnFormatter,
    EpochMetricsFormatter,
    MultiplexFormatter,
)


def _record(name="dftn.test", level=logging.INFO, msg="hello"):
    return logging.LogRecord(
        name=name,
        level=level,
        pathname=__file__,
        lineno=10,
        msg=msg,
        args=(),
        exc_info=None,
    )


def test_dftn_formatter_basic_format():
    output = DftnFormatter(include_timestamps=False).format(_record())

    assert output == "INFO [dftn.test] hello"


def test_dftn_formatter_thread_and_process_fields():
    formatter = DftnFormatter(
        include_timestamps=False, include_thread_info=True, include_process_info=True
    )

    output = formatter.format(_record())

    assert "[Thread:" in output
    assert "[PID:" in output
    assert output.endswith("hello")


def test_epoch_metrics_formatter_renders_row():
    record = _record(name=METRICS_LOGGER, msg="Epoch 3 finished")
    record.epoch = 3
    record.train_loss = 0.41213
    record.val_weighted_f1 = 0.9375
    record.eps_a = [1.0, 0.5]
    record.zero_fraction = []

    output = EpochMetricsFormatter().format(record)

    assert "epoch 3 loss=0.4121 f1=0.9375" in output
    assert "eps_a=[1, 0.5]" in output
    assert "zeros=" not in output


def test_multiplex_formatter_routes_metrics_records():
    formatter = MultiplexFormatter(DftnFormatter(include_timestamps=False), EpochMetricsFormatter())
    record = _record(name=METRICS_LOGGER)
    record.epoch = 0
    record.train_loss = 1.0
    record.val_weighted_f1 = 0.5

    assert "epoch 0 loss=1.0000" in formatter.format(record)


def test_multiplex_formatter_uses_default_formatter():
    formatter = MultiplexFormatter(DftnFormatter(include_timestamps=False), EpochMetricsFormatter())

    output = formatter.format(_record(level=logging.WARNING, msg="warning message"))

    assert output == "WARNING [dftn.test] warning message"
