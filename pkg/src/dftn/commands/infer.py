"""
``dftn infer``: classify the windows of a stream with a trained model.
"""

from pathlib import Path
from typing import Annotated, List, Optional, Tuple

import numpy as np
import pandas as pd
import typer

from dftn.constants import DEFAULT_WINDOW_T, PREDICTIONS_FILE_NAME, SYNTH_BRANCHES
from dftn.data.dataset import WindowDataset, segment_windows
from dftn.data.loader import load_csv, load_schema
from dftn.data.synth import synth_dataset
from dftn.errors import ConfigurationError, UsageError
from dftn.logging import get_logger, log_artifact_event
from dftn.utils.console import info, success, warning
from dftn.utils.run_config import RunConfig, resolve_run_config

from .shared import LoadedModel, command_errors, load_standardizer, parse_names, require_file
from .shared.options import (
    ClassesOpt,
    ConfigOpt,
    CsvOpt,
    MutedOpt,
    NoiseOpt,
    PhiSeedOpt,
    SchemaOpt,
    SeedOpt,
    StandardizerOpt,
    StrideOpt,
    SynthOpt,
    WindowsPerClassOpt,
    WindowTOpt,
)

logger = get_logger("dftn.commands.infer")


def inference_windows(
    run: RunConfig, model: Path, standardizer: Optional[str] = None
) -> Tuple[WindowDataset, Optional[List[str]]]:
    """
    Every window of the configured stream and the class names of the training labels.

    CSV channels are standardized with the statistics saved by ``train``;
    the stream's own labels are read but not used for prediction.
    """
    run.check_dataset_source()
    source = run.dataset
    if source.synth:
        dataset = synth_dataset(
            classes=source.classes,
            branches=SYNTH_BRANCHES,
            windows_per_class=source.windows_per_class,
            seed=run.training.seed,
            window_t=source.window_t or DEFAULT_WINDOW_T,
            noise=source.noise,
            muted=source.muted,
        )
        return dataset, dataset.class_names
    schema = load_schema(source.schema)
    fitted = load_standardizer(model, standardizer)
    stream = load_csv(require_file(source.csv, "input stream"), schema, fitted)
    if fitted is None:
        warning("No standardizer found next to the model; channels are used unscaled")
        names = None
    else:
        names = [str(value) for value in fitted.label_values]
    window_t = source.window_t or schema.window_t
    return segment_windows(stream, window_t, source.stride or schema.stride), names


def predictions_frame(
    predictions: np.ndarray, probabilities: np.ndarray, class_names: List[str]
) -> pd.DataFrame:
    frame = pd.DataFrame(
        {
            "window": np.arange(len(predictions)),
            "predicted": predictions,
            "predicted_label": [class_names[int(p)] for p in predictions],
        }
    )
    for index, name in enumerate(class_names):
        frame[f"p[{name}]"] = probabilities[:, index]
    return frame


def infer(
    model: Annotated[str, typer.Argument(help="Packed model (.dftn) or checkpoint (.npz)")],
    input_csv: Annotated[
        Optional[str], typer.Option("--input", help="Stream to classify (same layout as --csv)")
    ] = None,
    config: ConfigOpt = None,
    csv: CsvOpt = None,
    schema: SchemaOpt = None,
    synth: SynthOpt = False,
    classes: ClassesOpt = None,
    windows_per_class: WindowsPerClassOpt = None,
    noise: NoiseOpt = None,
    muted: MutedOpt = None,
    window_t: WindowTOpt = None,
    stride: StrideOpt = None,
    seed: SeedOpt = None,
    standardizer: StandardizerOpt = None,
    phi_seed: PhiSeedOpt = None,
    out: Annotated[str, typer.Option("--out", help="Predictions CSV")] = PREDICTIONS_FILE_NAME,
):
    """Run packed inference and write one row per window"""
    with command_errors(logger, "Inference"):
        if input_csv and csv:
            raise UsageError("--input and --csv name the same stream; pass only one")
        model_path = require_file(model, "model")
        run = resolve_run_config(
            config,
            {
                "dataset.csv": input_csv or csv,
                "dataset.schema": schema,
                "dataset.synth": True if synth else None,
                "dataset.classes": classes,
                "dataset.windows_per_class": windows_per_class,
                "dataset.noise": noise,
                "dataset.muted": parse_names(muted),
                "dataset.window_t": window_t,
                "dataset.stride": stride,
                "training.seed": seed,
            },
        )
        # a snapshot names the training stream; an explicit input replaces it
        if input_csv or csv:
            run.dataset.synth = False
        windows, names = inference_windows(run, model_path, standardizer)
        loaded = LoadedModel.load(model_path)
        sensors, window, classes_count = loaded.shape
        if windows.windows.shape[1:] != (window, sensors):
            raise ConfigurationError(
                f"model expects windows of {window} x {sensors}, input gives "
                f"{windows.window_t} x {windows.sensor_channels}"
            )

        predictions, probabilities = loaded.infer(windows.windows, phi_seed)
        if names is None or len(names) != classes_count:
            names = [str(g) for g in range(classes_count)]
        frame = predictions_frame(predictions, probabilities, names)
        frame.to_csv(out, index=False)
        log_artifact_event("write", out, Path(out).stat().st_size)
        info(f"Classified {len(frame)} windows")
        success(f"Predictions written to {out}")
