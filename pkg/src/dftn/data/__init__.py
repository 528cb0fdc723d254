"""
Sensor data: CSV ingestion, sliding-window segmentation, synthetic
datasets and the weighted F1 metric.
"""

from .dataset import (
    LabeledStream,
    WindowDataset,
    majority_labels,
    segment_windows,
    train_validation_split,
)
from .loader import (
    DatasetSchema,
    Standardizer,
    available_schemas,
    downsample,
    encode_labels,
    load_csv,
    load_schema,
    parse_schema,
    split_stream,
)
from .metrics import classification_report, confusion_matrix, precision_recall, weighted_f1
from .synth import branch_ranges, synth_dataset

__all__ = [
    "LabeledStream",
    "WindowDataset",
    "majority_labels",
    "segment_windows",
    "train_validation_split",
    "DatasetSchema",
    "Standardizer",
    "available_schemas",
    "downsample",
    "encode_labels",
    "load_csv",
    "load_schema",
    "parse_schema",
    "split_stream",
    "confusion_matrix",
    "precision_recall",
    "weighted_f1",
    "classification_report",
    "branch_ranges",
    "synth_dataset",
]
