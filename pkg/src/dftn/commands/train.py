"""
``dftn train``: train a ternary network and write its artifacts.

Outputs in ``--out``: the packed model, the per-epoch metrics CSV, the
training checkpoint, the standardizer of CSV runs and the resolved run
configuration.
"""

from dataclasses import replace
from pathlib import Path
from typing import Optional

from dftn.constants import (
    CHECKPOINT_FILE_NAME,
    METRICS_FILE_NAME,
    MODEL_FILE_NAME,
    RESOLVED_CONFIG_NAME,
    STANDARDIZER_FILE_NAME,
    SWEEP_FILE_NAME,
)
from dftn.data.dataset import WindowDataset
from dftn.logging import get_logger, log_artifact_event
from dftn.model import (
    MetricsHistory,
    TrainState,
    export_packed,
    save_checkpoint,
    sweep_xi,
)
from dftn.model import train as run_training
from dftn.utils.console import console, create_table, frame_table, info, success
from dftn.utils.run_config import RunConfig, resolve_run_config, write_run_config

from .shared import command_errors, load_datasets, parse_names, prepare_output
from .shared.options import (
    BatchOpt,
    ClassesOpt,
    ConfigOpt,
    CsvOpt,
    EpochsOpt,
    FullPrecisionOpt,
    FusionOpt,
    KaOpt,
    KwOpt,
    LearningRateOpt,
    MutedOpt,
    NoiseOpt,
    OutOpt,
    PhiSeedOpt,
    ProgressOpt,
    ReducedOpt,
    SchemaOpt,
    SeedOpt,
    StrideOpt,
    SynthOpt,
    ValidationCsvOpt,
    ValidationFractionOpt,
    WindowsPerClassOpt,
    WindowTOpt,
    XiOpt,
    XiSweepOpt,
)

logger = get_logger("dftn.commands.train")


def build_state(run: RunConfig, dataset: WindowDataset, xi: Optional[float] = None) -> TrainState:
    """Fresh state for ``dataset``; every call gets its own quantizer calibration"""
    quant = replace(run.quant, epsilon_a=[], xi=run.quant.xi if xi is None else xi)
    return TrainState.create(
        network=run.build_network(dataset.num_classes, dataset.window_t),
        fusion=run.build_fusion(dataset.branch_ranges),
        quant=quant,
        seed=run.training.seed,
        learning_rate=run.training.learning_rate,
        decay=run.training.decay,
    )


def _write_bytes(path: Path, data: bytes) -> None:
    path.write_bytes(data)
    log_artifact_event("write", str(path), len(data))


def _show_history(history: MetricsHistory) -> None:
    table = create_table("Training", ["epoch", "train loss", "val weighted F1"])
    for record in history.records:
        table.add_row(
            str(record.epoch), f"{record.train_loss:.4f}", f"{record.val_weighted_f1:.4f}"
        )
    console.print(table)


def train(
    config: ConfigOpt = None,
    out: OutOpt = None,
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
    xi: XiOpt = None,
    kw: KwOpt = None,
    ka: KaOpt = None,
    full_precision: FullPrecisionOpt = False,
    fusion: FusionOpt = None,
    reduced: ReducedOpt = None,
    phi_seed: PhiSeedOpt = None,
    seed: SeedOpt = None,
    epochs: EpochsOpt = None,
    batch: BatchOpt = None,
    lr: LearningRateOpt = None,
    validation_fraction: ValidationFractionOpt = None,
    xi_sweep: XiSweepOpt = None,
    progress: ProgressOpt = False,
):
    """Train a ternary network on a CSV stream or the synthetic dataset"""
    with command_errors(logger, "Training"):
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
                "quant.xi": xi,
                "quant.k_w": kw,
                "quant.k_a": ka,
                "quant.enabled": False if full_precision else None,
                "fusion.mode": fusion,
                "fusion.reduced": parse_names(reduced),
                "fusion.phi_seed": phi_seed,
                "training.seed": seed,
                "training.epochs": epochs,
                "training.batch_size": batch,
                "training.learning_rate": lr,
                "training.validation_fraction": validation_fraction,
                "output.out": out,
                "output.xi_sweep": parse_names(xi_sweep),
            },
        )
        run.training.show_progress = progress
        bundle = load_datasets(run)
        info(
            f"Training on {len(bundle.train)} windows, validating on {len(bundle.validation)} "
            f"({bundle.train.num_classes} classes, {bundle.train.sensor_channels} channels)"
        )

        out_dir = prepare_output(run.output.out)
        write_run_config(run, out_dir / RESOLVED_CONFIG_NAME)
        if bundle.standardizer is not None:
            bundle.standardizer.save(out_dir / STANDARDIZER_FILE_NAME)

        if run.output.xi_sweep:
            sweep = sweep_xi(
                bundle.train,
                bundle.validation,
                lambda value: build_state(run, bundle.train, value),
                run.output.xi_sweep,
                run.training,
            )
            sweep.to_csv(out_dir / SWEEP_FILE_NAME, index=False)
            console.print(frame_table("xi sweep", sweep))
            success(f"Sweep written to {out_dir / SWEEP_FILE_NAME}")
            return

        state, history = run_training(
            bundle.train, build_state(run, bundle.train), run.training, bundle.validation
        )
        history.to_csv(out_dir / METRICS_FILE_NAME)
        save_checkpoint(state, out_dir / CHECKPOINT_FILE_NAME)
        if state.quant.enabled:
            _write_bytes(out_dir / MODEL_FILE_NAME, export_packed(state))
        else:
            info("Full-precision run: no packed model written")

        _show_history(history)
        final = history.final
        if final is not None:
            logger.info(f"Final validation weighted F1 {final.val_weighted_f1:.4f}")
            success(f"Final validation weighted F1: {final.val_weighted_f1:.4f}")
        success(f"Artifacts written to {out_dir}")
