"""
Error handling and dataset plumbing shared by the commands.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Optional

import typer

from dftn.constants import (
    DEFAULT_WINDOW_T,
    EXIT_FAILURE,
    EXIT_USAGE,
    STANDARDIZER_FILE_NAME,
    SYNTH_BRANCHES,
)
from dftn.data.dataset import WindowDataset, segment_windows, train_validation_split
from dftn.data.loader import Standardizer, load_csv, load_schema, split_stream
from dftn.data.synth import synth_dataset
from dftn.errors import DftnError, UsageError
from dftn.utils.console import error
from dftn.utils.run_config import RunConfig


@contextmanager
def command_errors(logger: logging.Logger, action: str) -> Iterator[None]:
    """
    Turn library errors into a console message and an exit code.

    Usage errors exit 2, every other ``DftnError`` or I/O failure exits 1.
    """
    try:
        yield
    except UsageError as e:
        logger.error(f"{action} failed: {e}")
        error(str(e))
        raise typer.Exit(EXIT_USAGE)
    except (DftnError, OSError) as e:
        logger.error(f"{action} failed: {e}")
        error(f"{action} failed: {e}")
        raise typer.Exit(EXIT_FAILURE)


def parse_names(text: Optional[str]) -> Optional[List[str]]:
    """Comma-separated flag value as a list; None when the flag was not given"""
    if text is None:
        return None
    return [item.strip() for item in text.split(",") if item.strip()]


def prepare_output(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


@dataclass
class DatasetBundle:
    train: WindowDataset
    validation: WindowDataset
    standardizer: Optional[Standardizer] = None


def _synth_bundle(config: RunConfig) -> DatasetBundle:
    source = config.dataset
    dataset = synth_dataset(
        classes=source.classes,
        branches=SYNTH_BRANCHES,
        windows_per_class=source.windows_per_class,
        seed=config.training.seed,
        window_t=source.window_t or DEFAULT_WINDOW_T,
        noise=source.noise,
        muted=source.muted,
    )
    train, validation = train_validation_split(
        dataset, config.training.validation_fraction, config.training.seed
    )
    return DatasetBundle(train=train, validation=validation)


def _csv_bundle(config: RunConfig, standardizer: Optional[Standardizer]) -> DatasetBundle:
    source = config.dataset
    schema = load_schema(source.schema)
    window_t = source.window_t or schema.window_t
    stride = source.stride or schema.stride

    # a saved standardizer scales channels and encodes labels in training order
    stream = load_csv(require_file(source.csv, "dataset"), schema, standardizer)
    if source.validation_csv:
        train_stream = stream
    else:
        train_stream, validation_stream = split_stream(
            stream, config.training.validation_fraction
        )
    if standardizer is None:
        standardizer = Standardizer.fit(train_stream)
        train_stream = standardizer.apply(train_stream)
        if not source.validation_csv:
            validation_stream = standardizer.apply(validation_stream)
    if source.validation_csv:
        validation_stream = load_csv(
            require_file(source.validation_csv, "validation dataset"), schema, standardizer
        )

    classes = len(standardizer.label_values)
    return DatasetBundle(
        train=segment_windows(train_stream, window_t, stride, classes),
        validation=segment_windows(validation_stream, window_t, stride, classes),
        standardizer=standardizer,
    )


def load_datasets(
    config: RunConfig, standardizer: Optional[Standardizer] = None
) -> DatasetBundle:
    """
    Training and validation windows for ``config``.

    CSV channels are standardized with statistics of the training part only;
    pass a saved ``standardizer`` to reuse the statistics of an earlier run.

    Raises:
        UsageError: no dataset source or conflicting sources
    """
    config.check_dataset_source()
    if config.dataset.synth:
        return _synth_bundle(config)
    return _csv_bundle(config, standardizer)


def standardizer_path(model: Path, explicit: Optional[str]) -> Optional[Path]:
    """Sidecar standardizer of ``model``; None when there is none"""
    path = Path(explicit) if explicit else model.parent / STANDARDIZER_FILE_NAME
    if explicit and not path.exists():
        raise UsageError(f"standardizer file not found: {path}")
    return path if path.exists() else None


def require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} not found: {path}")
    return p


def load_standardizer(model: Path, explicit: Optional[str]) -> Optional[Standardizer]:
    path = standardizer_path(model, explicit)
    return Standardizer.load(path) if path is not None else None

