"""
``dftn eval``: score a trained model on a dataset.

MODEL is a packed ``.dftn`` file or a ``state.npz`` checkpoint; checkpoints
also cover full-precision runs, which have no packed form.
"""

from dataclasses import replace
from typing import Annotated, Optional

import numpy as np
import typer

from dftn.constants import EVAL_FILE_NAME
from dftn.data.dataset import WindowDataset
from dftn.data.metrics import classification_report, confusion_matrix, weighted_f1
from dftn.errors import ConfigurationError, UsageError
from dftn.logging import get_logger
from dftn.utils.console import confusion_table, console, frame_table, info, success
from dftn.utils.run_config import resolve_run_config

from .shared import (
    LoadedModel,
    command_errors,
    load_datasets,
    load_standardizer,
    parse_names,
    prepare_output,
    require_file,
)
from .shared.options import (
    ClassesOpt,
    ConfigOpt,
    CsvOpt,
    MutedOpt,
    NoiseOpt,
    OutOpt,
    PhiSeedOpt,
    SchemaOpt,
    SeedOpt,
    StandardizerOpt,
    StrideOpt,
    SynthOpt,
    ValidationCsvOpt,
    ValidationFractionOpt,
    WindowsPerClassOpt,
    WindowTOpt,
)

logger = get_logger("dftn.commands.eval")

EMIT_FORMATS = ("csv",)


def select_split(train: WindowDataset, validation: WindowDataset, split: str) -> WindowDataset:
    if split == "validation":
        return validation
    if split == "train":
        return train
    return replace(
        train,
        windows=np.concatenate([train.windows, validation.windows]),
        labels=np.concatenate([train.labels, validation.labels]),
    )


def eval_model(
    model: Annotated[str, typer.Argument(help="Packed model (.dftn) or checkpoint (.npz)")],
    config: ConfigOpt = None,
    csv: CsvOpt = None,
    schema: SchemaOpt = None,
    validation_csv: ValidationCsvOpt = None,
    synth: SynthOpt = False,
    classes: ClassesOpt = None,
    windows_per_class: WindowsPerClassOpt = None,
    noise: NoiseOpt = None,
    muted: MutedOpt = None,
    window_t: WindowTOpt = None,
    stride: StrideOpt = None,
    seed: SeedOpt = None,
    validation_fraction: ValidationFractionOpt = None,
    standardizer: StandardizerOpt = None,
    phi_seed: PhiSeedOpt = None,
    split: Annotated[
        str, typer.Option("--split", help="Windows to score: validation, train or all")
    ] = "validation",
    emit: Annotated[
        Optional[str], typer.Option("--emit", help="Also write metrics; format: csv")
    ] = None,
    out: OutOpt = None,
):
    """Print weighted F1, per-class precision/recall and the confusion matrix"""
    with command_errors(logger, "Evaluation"):
        if split not in ("validation", "train", "all"):
            raise UsageError(f"--split must be validation, train or all, got '{split}'")
        if emit is not None and emit not in EMIT_FORMATS:
            raise UsageError(f"--emit supports {EMIT_FORMATS}, got '{emit}'")
        model_path = require_file(model, "model")
        run = resolve_run_config(
            config,
            {
                "dataset.csv": csv,
                "dataset.schema": schema,
                "dataset.validation_csv": validation_csv,
                "dataset.synth": True if synth else None,
                "dataset.classes": classes,
                "dataset.windows_per_class": windows_per_class,
                "dataset.noise": noise,
                "dataset.muted": parse_names(muted),
                "dataset.window_t": window_t,
                "dataset.stride": stride,
                "training.seed": seed,
                "training.validation_fraction": validation_fraction,
                "output.out": out,
            },
        )
        bundle = load_datasets(run, load_standardizer(model_path, standardizer))
        dataset = select_split(bundle.train, bundle.validation, split)
        if len(dataset) == 0:
            raise ConfigurationError(f"the {split} split holds no windows")
        loaded = LoadedModel.load(model_path)
        loaded.check_compatible(dataset)

        predictions, _ = loaded.infer(dataset.windows, phi_seed)
        score = weighted_f1(predictions, dataset.labels, dataset.num_classes)
        report = classification_report(
            predictions, dataset.labels, dataset.num_classes, dataset.class_names
        )
        matrix = confusion_matrix(predictions, dataset.labels, dataset.num_classes)

        title = f"Per-class metrics ({split}, {len(dataset)} windows)"
        console.print(frame_table(title, report))
        console.print(confusion_table(matrix, dataset.class_names))
        logger.info(f"Weighted F1 on {split} split of {model_path}: {score:.6f}")
        success(f"Weighted F1: {score:.4f}")

        if emit == "csv":
            out_dir = prepare_output(run.output.out)
            report["weighted_f1"] = score
            report.to_csv(out_dir / EVAL_FILE_NAME, index=False)
            info(f"Metrics written to {out_dir / EVAL_FILE_NAME}")
