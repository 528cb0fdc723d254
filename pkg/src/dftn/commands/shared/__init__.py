"""
Helpers shared by the dftn commands.
"""

from .models import LoadedModel
from .runner import (
    DatasetBundle,
    command_errors,
    load_datasets,
    load_standardizer,
    parse_names,
    prepare_output,
    require_file,
)

__all__ = [
    "LoadedModel",
    "DatasetBundle",
    "command_errors",
    "load_datasets",
    "load_standardizer",
    "parse_names",
    "prepare_output",
    "require_file",
]
