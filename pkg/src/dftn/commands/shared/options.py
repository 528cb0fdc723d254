"""
Shared Typer CLI options for dftn commands.

Options that feed the run configuration default to ``None`` so an unset flag
never overrides a value from ``--config``.
"""

from typing import Annotated, Optional

import typer

# Run configuration
ConfigOpt = Annotated[
    Optional[str],
    typer.Option(
        "--config",
        help="INI run configuration; flags override its values",
    ),
]

OutOpt = Annotated[
    Optional[str],
    typer.Option("--out", help="Output directory for model, metrics and snapshot"),
]

# Dataset Options
CsvOpt = Annotated[
    Optional[str],
    typer.Option("--csv", help="Sensor stream CSV: one row per timestamp, label last"),
]

SchemaOpt = Annotated[
    Optional[str],
    typer.Option(
        "--schema",
        help="Dataset schema: preset name (opportunity, pamap2, unimib) or schema file",
    ),
]

ValidationCsvOpt = Annotated[
    Optional[str],
    typer.Option(
        "--validation-csv",
        help="Separate validation stream; default is a temporal split of --csv",
    ),
]

SynthOpt = Annotated[
    bool,
    typer.Option("--synth", help="Use the seeded synthetic dataset", show_default=False),
]

ClassesOpt = Annotated[
    Optional[int],
    typer.Option("--classes", help="Synthetic dataset: number of classes"),
]

WindowsPerClassOpt = Annotated[
    Optional[int],
    typer.Option("--windows-per-class", help="Synthetic dataset: windows per class"),
]

NoiseOpt = Annotated[
    Optional[float],
    typer.Option("--noise", help="Synthetic dataset: noise amplitude"),
]

MutedOpt = Annotated[
    Optional[str],
    typer.Option(
        "--muted",
        help="Synthetic dataset: comma-separated branches generated without class information",
    ),
]

WindowTOpt = Annotated[
    Optional[int],
    typer.Option("--window-t", help="Window length T in samples (default: schema value)"),
]

StrideOpt = Annotated[
    Optional[int],
    typer.Option("--stride", help="Window stride in samples (default: schema value)"),
]

StandardizerOpt = Annotated[
    Optional[str],
    typer.Option(
        "--standardizer",
        help="Standardizer JSON written by train (default: next to the model)",
    ),
]

# Quantizer Options
XiOpt = Annotated[
    Optional[float],
    typer.Option("--xi", help="Shift threshold xi setting the weight scale"),
]

KwOpt = Annotated[Optional[int], typer.Option("--kw", help="Weight bit-width")]

KaOpt = Annotated[Optional[int], typer.Option("--ka", help="Activation bit-width")]

FullPrecisionOpt = Annotated[
    bool,
    typer.Option(
        "--full-precision",
        help="Train the same topology without weight or activation quantization",
    ),
]

# Fusion Options
FusionOpt = Annotated[
    Optional[str],
    typer.Option("--fusion", help="Fusion mode: early, late or dynamic"),
]

ReducedOpt = Annotated[
    Optional[str],
    typer.Option(
        "--reduced",
        help="Comma-separated reduced branches or a preset (periodic, sporadic)",
    ),
]

PhiSeedOpt = Annotated[
    Optional[int],
    typer.Option("--phi-seed", help="Seed of the run-time fusion sampling"),
]

# Training Options
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Training seed")]

EpochsOpt = Annotated[Optional[int], typer.Option("--epochs", help="Training epochs")]

BatchOpt = Annotated[Optional[int], typer.Option("--batch", help="Mini-batch size")]

LearningRateOpt = Annotated[
    Optional[float],
    typer.Option("--lr", help="AdaDelta learning rate"),
]

ValidationFractionOpt = Annotated[
    Optional[float],
    typer.Option("--validation-fraction", help="Share of data held out for validation"),
]

XiSweepOpt = Annotated[
    Optional[str],
    typer.Option(
        "--xi-sweep",
        help="Comma-separated xi values; trains once per value and writes xi_sweep.csv",
    ),
]

ProgressOpt = Annotated[
    bool,
    typer.Option("--progress/--no-progress", help="Show a progress bar while training"),
]
