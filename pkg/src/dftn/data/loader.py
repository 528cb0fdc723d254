"""
CSV ingestion for labeled sensor streams.

One row per timestamp, channel columns followed by an integer label column.
Gaps (the schema's NA token or empty cells) are linearly interpolated inside
each channel and zero-filled at the edges. Channel standardization uses
statistics fit on the training part only and travels with the model as a
JSON sidecar.
"""

import configparser
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from dftn.constants import DEFAULT_STRIDE, DEFAULT_WINDOW_T
from dftn.errors import ConfigurationError, ParameterError, ParseError
from dftn.logging import get_logger

from .dataset import BranchRange, LabeledStream

logger = get_logger("dftn.data.loader")

SCHEMA_PACKAGE = "dftn.data.schemas"
_RANGE = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*$")


@dataclass
class DatasetSchema:
    """Column layout and windowing defaults of a sensor dataset"""

    name: str
    channels: int
    branches: Tuple[BranchRange, ...]
    window_t: int = DEFAULT_WINDOW_T
    stride: int = DEFAULT_STRIDE
    sample_rate: float = 30.0
    downsample: int = 1
    delimiter: str = ","
    header: bool = False
    na_token: str = "NaN"

    def __post_init__(self):
        expected = 0
        for name, start, stop in self.branches:
            if start != expected or stop <= start:
                raise ParseError(f"branch '{name}' does not continue the channel partition")
            expected = stop
        if expected != self.channels:
            raise ParseError(
                f"branches cover {expected} channels but the schema declares {self.channels}"
            )


def available_schemas() -> List[str]:
    """Names of the presets shipped with the package"""
    files = resources.files(SCHEMA_PACKAGE).iterdir()
    return sorted(f.name[:-4] for f in files if f.name.endswith(".ini"))


def _parse_range(name: str, text: str) -> Tuple[int, int]:
    match = _RANGE.match(text)
    if not match:
        raise ParseError(f"branch '{name}': expected an inclusive span like '0-35', got '{text}'")
    first, last = int(match.group(1)), int(match.group(2))
    if last < first:
        raise ParseError(f"branch '{name}': span end {last} precedes start {first}")
    return first, last + 1


def parse_schema(text: str, source: str = "<schema>") -> DatasetSchema:
    """Parse schema INI text: a ``[dataset]`` section and an ordered ``[branches]`` section"""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ParseError(f"{source}: {e}") from e
    for section in ("dataset", "branches"):
        if not parser.has_section(section):
            raise ParseError(f"{source}: missing [{section}] section")

    ds = parser["dataset"]
    try:
        branches = tuple(
            (name, *_parse_range(name, span)) for name, span in parser.items("branches")
        )
        return DatasetSchema(
            name=ds.get("name", Path(source).stem),
            channels=ds.getint("channels"),
            branches=branches,
            window_t=ds.getint("window_t", DEFAULT_WINDOW_T),
            stride=ds.getint("stride", DEFAULT_STRIDE),
            sample_rate=ds.getfloat("sample_rate", 30.0),
            downsample=ds.getint("downsample", 1),
            delimiter=ds.get("delimiter", ",").replace("\\t", "\t"),
            header=ds.getboolean("header", False),
            na_token=ds.get("na_token", "NaN"),
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"{source}: {e}") from e


def load_schema(name_or_path: Union[str, Path]) -> DatasetSchema:
    """Load a shipped preset by name or a schema file by path"""
    path = Path(name_or_path)
    if path.is_file():
        return parse_schema(path.read_text(encoding="utf-8"), source=str(path))
    preset = resources.files(SCHEMA_PACKAGE) / f"{name_or_path}.ini"
    if not preset.is_file():
        raise ParseError(
            f"unknown schema '{name_or_path}'; presets: {', '.join(available_schemas())}"
        )
    return parse_schema(preset.read_text(encoding="utf-8"), source=f"{name_or_path}.ini")


def _pandas_line(message: str) -> Optional[int]:
    match = re.search(r"line (\d+)", message)
    return int(match.group(1)) if match else None


def read_table(path: Union[str, Path], schema: DatasetSchema) -> pd.DataFrame:
    """Raw cells as strings, checked for the schema's column count"""
    try:
        frame = pd.read_csv(
            path,
            sep=schema.delimiter,
            header=0 if schema.header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            engine="python",
        )
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed row: {e}", line=_pandas_line(str(e))) from e
    except pd.errors.EmptyDataError as e:
        raise ParseError(f"{path} holds no rows") from e

    first_line = 2 if schema.header else 1
    expected = schema.channels + 1
    if frame.shape[1] != expected:
        raise ParseError(
            f"expected {expected} columns ({schema.channels} channels + label), "
            f"got {frame.shape[1]}",
            line=first_line,
        )
    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        row = int(np.flatnonzero(short)[0])
        raise ParseError(f"row has fewer than {expected} columns", line=first_line + row)
    frame.index = pd.RangeIndex(first_line, first_line + len(frame))
    return frame


def _to_numeric(frame: pd.DataFrame, na_token: str) -> pd.DataFrame:
    cells = frame.apply(lambda col: col.str.strip())
    gaps = cells.isin({na_token, ""})
    numeric = cells.apply(pd.to_numeric, errors="coerce")
    bad = numeric.isna() & ~gaps
    if bad.to_numpy().any():
        line, column = next(iter(bad.stack()[lambda s: s].index))
        raise ParseError(
            f"column {column}: '{frame.at[line, column]}' is not a number", line=int(line)
        )
    return numeric


def load_csv(
    path: Union[str, Path],
    schema: DatasetSchema,
    standardizer: Optional["Standardizer"] = None,
) -> LabeledStream:
    """
    Read a labeled stream.

    Gaps are interpolated per channel, the stream is downsampled by the
    schema factor and labels are encoded as class indices. Channels are
    standardized only when a fitted ``standardizer`` is given.

    Raises:
        ParseError: malformed rows, wrong column count or non-numeric cells
        ConfigurationError: ``standardizer`` given and a label outside its training labels
    """
    frame = read_table(path, schema)
    numeric = _to_numeric(frame, schema.na_token)

    label_column = numeric.columns[-1]
    raw_labels = numeric[label_column]
    invalid = (raw_labels.isna() | (np.mod(raw_labels, 1) != 0)).to_numpy()
    if invalid.any():
        line = int(raw_labels.index[np.flatnonzero(invalid)[0]])
        raise ParseError("label column must hold integers", line=line)

    channels = numeric.drop(columns=[label_column])
    channels = channels.interpolate(method="linear", axis=0, limit_area="inside").fillna(0.0)

    values = channels.to_numpy(dtype=np.float64)
    raw = raw_labels.to_numpy(dtype=np.int64)
    if schema.downsample > 1:
        values, raw = downsample(values, schema.downsample), downsample(raw, schema.downsample)

    if standardizer is not None:
        labels = standardizer.encode(raw)
        label_values = list(standardizer.label_values)
        values = standardizer.transform(values)
    else:
        labels, label_values = encode_labels(raw)

    logger.debug(f"Loaded {len(values)} samples x {values.shape[1]} channels from {path}")
    return LabeledStream(
        values=values.astype(np.float32),
        labels=labels,
        branch_ranges=schema.branches,
        sample_rate=schema.sample_rate / schema.downsample,
        label_values=label_values,
    )


def downsample(values: np.ndarray, factor: int) -> np.ndarray:
    """Keep every ``factor``-th timestamp starting with the first"""
    if factor < 1:
        raise ParameterError(f"downsample factor must be >= 1, got {factor}")
    return values[::factor]


def encode_labels(raw: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Map raw integer labels onto ``0..G-1`` in ascending label order"""
    values, encoded = np.unique(np.asarray(raw, dtype=np.int64), return_inverse=True)
    return encoded.astype(np.int64), [int(v) for v in values]


def split_stream(stream: LabeledStream, fraction: float) -> Tuple[LabeledStream, LabeledStream]:
    """Temporal split: the last ``fraction`` of timestamps becomes the validation part"""
    if not 0.0 < fraction < 1.0:
        raise ParameterError(f"validation fraction must lie in (0, 1), got {fraction}")
    cut = int(round(len(stream) * (1.0 - fraction)))

    def part(sl: slice) -> LabeledStream:
        return LabeledStream(
            values=stream.values[sl],
            labels=stream.labels[sl],
            branch_ranges=stream.branch_ranges,
            sample_rate=stream.sample_rate,
            label_values=list(stream.label_values),
        )

    return part(slice(0, cut)), part(slice(cut, None))


@dataclass
class Standardizer:
    """Per-channel mean and standard deviation plus the label encoding of the training data"""

    mean: np.ndarray
    std: np.ndarray
    label_values: List[int] = field(default_factory=list)

    @classmethod
    def fit(cls, stream: LabeledStream) -> "Standardizer":
        values = np.asarray(stream.values, dtype=np.float64)
        std = values.std(axis=0)
        return cls(
            mean=values.mean(axis=0),
            std=np.where(std > 0, std, 1.0),
            label_values=list(stream.label_values),
        )

    def transform(self, values: np.ndarray) -> np.ndarray:
        if values.shape[-1] != len(self.mean):
            raise ParameterError(
                f"standardizer was fit on {len(self.mean)} channels, got {values.shape[-1]}"
            )
        return (np.asarray(values, dtype=np.float64) - self.mean) / self.std

    def apply(self, stream: LabeledStream) -> LabeledStream:
        return LabeledStream(
            values=self.transform(stream.values).astype(np.float32),
            labels=stream.labels,
            branch_ranges=stream.branch_ranges,
            sample_rate=stream.sample_rate,
            label_values=list(stream.label_values),
        )

    def encode(self, raw: np.ndarray) -> np.ndarray:
        """
        Encode raw labels with the training label order.

        Raises:
            ConfigurationError: a raw label the training data never held
        """
        lookup: Dict[int, int] = {value: index for index, value in enumerate(self.label_values)}
        unknown = sorted({int(v) for v in raw} - lookup.keys())
        if unknown:
            raise ConfigurationError(f"labels {unknown} were not seen in the training data")
        return np.array([lookup[int(v)] for v in raw], dtype=np.int64)

    def to_dict(self) -> Dict[str, List]:
        return {
            "mean": [float(v) for v in self.mean],
            "std": [float(v) for v in self.std],
            "label_values": list(self.label_values),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Sequence]) -> "Standardizer":
        try:
            return cls(
                mean=np.asarray(data["mean"], dtype=np.float64),
                std=np.asarray(data["std"], dtype=np.float64),
                label_values=[int(v) for v in data.get("label_values", [])],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"invalid standardizer data: {e}") from e

    def save(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)

    @classmethod
    def load(cls, path: Path) -> "Standardizer":
        try:
            with open(path, "r", encoding="utf-8") as f:
                return cls.from_dict(json.load(f))
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: {e.msg}", line=e.lineno) from e
