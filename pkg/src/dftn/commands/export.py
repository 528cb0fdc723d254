"""
``dftn export``: re-export a packed model from a training checkpoint.
"""

from pathlib import Path
from typing import Annotated, Optional

import typer

from dftn.constants import MODEL_FILE_NAME
from dftn.logging import get_logger, log_artifact_event
from dftn.logging.utils import format_size
from dftn.model import PackedModel, load_checkpoint
from dftn.utils.console import console, create_table, success

from .shared import command_errors, require_file

logger = get_logger("dftn.commands.export")


def layer_table(model: PackedModel):
    """Per packed layer: kind, weight shape, packed bytes and the ratio to 32-bit weights"""
    table = create_table(
        "Packed layers", ["layer", "kind", "shape", "params", "dense", "packed", "ratio"]
    )
    for name, layer in zip(model.layer_names(), model.layers):
        weights = layer.weights
        dense = 4 * weights.size
        table.add_row(
            name,
            layer.kind.name.lower(),
            "x".join(str(d) for d in weights.shape),
            str(weights.size),
            format_size(dense),
            format_size(weights.storage_bytes()),
            f"{dense / weights.storage_bytes():.1f}x",
        )
    return table


def export(
    checkpoint: Annotated[str, typer.Argument(help="Training checkpoint (state.npz)")],
    out: Annotated[
        Optional[str],
        typer.Option("--out", help="Model file (default: model.dftn next to the checkpoint)"),
    ] = None,
):
    """Write the packed DFTN model of a checkpoint and report its compression"""
    with command_errors(logger, "Export"):
        path = require_file(checkpoint, "checkpoint")
        state = load_checkpoint(path)
        model = PackedModel.from_state(state)
        data = model.to_bytes()
        target = path.parent / MODEL_FILE_NAME if out is None else Path(out)
        target.write_bytes(data)
        log_artifact_event("write", str(target), len(data))

        console.print(layer_table(model))
        dense = 4 * sum(layer.weights.size for layer in model.layers)
        success(
            f"Wrote {target} ({format_size(len(data))}, "
            f"{dense / len(data):.1f}x smaller than 32-bit weights)"
        )
