"""
Run configuration: one INI file with a section per concern.

Values are merged as built-in defaults < config file < command-line flags.
``write_run_config`` stores the merged result as the snapshot written next to
the run outputs; feeding the snapshot back through ``--config`` reproduces
the run.
"""

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from dftn.constants import (
    CONV_FILTERS,
    CONV_KERNELS,
    CONV_STRIDES,
    DEFAULT_PHI_SEED,
    DENSE_UNITS,
    POOL_SIZES,
    SYNTH_CLASSES,
    SYNTH_NOISE,
    SYNTH_WINDOWS_PER_CLASS,
)
from dftn.errors import ConfigurationError, DftnError, UsageError
from dftn.fusion.spec import FusionMode, FusionSpec, build_fusion_spec
from dftn.model.network import NetworkConfig
from dftn.model.trainer import TrainingConfig
from dftn.quantize.config import QuantConfig

MAX_PHI_SEED = 2**32 - 1


@dataclass
class DatasetSource:
    """Either a CSV stream described by a schema or the synthetic generator"""

    csv: Optional[str] = None
    schema: Optional[str] = None
    validation_csv: Optional[str] = None
    synth: bool = False
    classes: int = SYNTH_CLASSES
    windows_per_class: int = SYNTH_WINDOWS_PER_CLASS
    noise: float = SYNTH_NOISE
    muted: List[str] = field(default_factory=list)
    window_t: Optional[int] = None
    stride: Optional[int] = None


@dataclass
class FusionSettings:
    mode: str = FusionMode.LATE.value
    reduced: List[str] = field(default_factory=list)
    phi_seed: int = DEFAULT_PHI_SEED


@dataclass
class NetworkOverrides:
    kernels: Tuple[int, ...] = CONV_KERNELS
    filters: Tuple[int, ...] = CONV_FILTERS
    strides: Tuple[int, ...] = CONV_STRIDES
    pools: Tuple[int, ...] = POOL_SIZES
    dense_units: int = DENSE_UNITS


@dataclass
class OutputPaths:
    out: str = "runs"
    xi_sweep: List[float] = field(default_factory=list)


@dataclass
class RunConfig:
    dataset: DatasetSource = field(default_factory=DatasetSource)
    quant: QuantConfig = field(default_factory=QuantConfig)
    fusion: FusionSettings = field(default_factory=FusionSettings)
    network: NetworkOverrides = field(default_factory=NetworkOverrides)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    output: OutputPaths = field(default_factory=OutputPaths)

    def build_network(self, num_classes: int, window_t: int) -> NetworkConfig:
        return NetworkConfig(
            num_classes=num_classes,
            window_t=window_t,
            kernels=self.network.kernels,
            filters=self.network.filters,
            strides=self.network.strides,
            pools=self.network.pools,
            dense_units=self.network.dense_units,
        )

    def build_fusion(self, ranges: Sequence[Tuple[str, int, int]]) -> FusionSpec:
        return build_fusion_spec(
            self.fusion.mode, ranges, self.fusion.reduced, self.fusion.phi_seed
        )

    def check_dataset_source(self) -> None:
        """
        Raises:
            UsageError: neither or both of a CSV path and ``--synth`` were given
        """
        if self.dataset.synth and self.dataset.csv:
            raise UsageError("--synth and --csv are mutually exclusive")
        if not self.dataset.synth and not self.dataset.csv:
            raise UsageError("a dataset is required: pass --csv PATH or --synth")
        if self.dataset.csv and not self.dataset.schema:
            raise UsageError("--csv needs --schema (preset name or schema file)")


# Value parsers and formatters


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional(parse: Callable[[str], Any]) -> Callable[[str], Any]:
    def parser(text: str) -> Any:
        return parse(text) if text.strip() else None

    return parser


def _list(parse: Callable[[str], Any]) -> Callable[[str], List[Any]]:
    def parser(text: str) -> List[Any]:
        return [parse(item.strip()) for item in text.split(",") if item.strip()]

    return parser


def _ints(text: str) -> Tuple[int, ...]:
    return tuple(_list(int)(text))


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_format(v) for v in value)
    return str(value)


SECTIONS: Dict[str, Dict[str, Callable[[str], Any]]] = {
    "dataset": {
        "csv": _optional(str),
        "schema": _optional(str),
        "validation_csv": _optional(str),
        "synth": _bool,
        "classes": int,
        "windows_per_class": int,
        "noise": float,
        "muted": _list(str),
        "window_t": _optional(int),
        "stride": _optional(int),
    },
    "quant": {"k_w": int, "k_a": int, "xi": float, "rounding": str, "enabled": _bool},
    "fusion": {"mode": str, "reduced": _list(str), "phi_seed": int},
    "network": {
        "kernels": _ints,
        "filters": _ints,
        "strides": _ints,
        "pools": _ints,
        "dense_units": int,
    },
    "training": {
        "epochs": int,
        "batch_size": int,
        "seed": int,
        "learning_rate": float,
        "decay": float,
        "validation_fraction": float,
    },
    "output": {"out": str, "xi_sweep": _list(float)},
}


def to_sections(config: RunConfig) -> Dict[str, Dict[str, str]]:
    """Flatten ``config`` into INI sections of strings"""
    sections: Dict[str, Dict[str, str]] = {}
    for section, keys in SECTIONS.items():
        part = getattr(config, section)
        sections[section] = {key: _format(getattr(part, key)) for key in keys}
    return sections


def _from_sections(sections: Mapping[str, Mapping[str, str]]) -> RunConfig:
    parsed: Dict[str, Dict[str, Any]] = {}
    for section, keys in SECTIONS.items():
        values = sections.get(section, {})
        parsed[section] = {}
        for key, text in values.items():
            try:
                parsed[section][key] = keys[key](text)
            except ValueError as e:
                raise ConfigurationError(f"[{section}] {key}: {e}") from e

    try:
        config = RunConfig(
            dataset=DatasetSource(**parsed["dataset"]),
            quant=QuantConfig(**parsed["quant"]),
            fusion=FusionSettings(**parsed["fusion"]),
            network=NetworkOverrides(**parsed["network"]),
            training=TrainingConfig(**parsed["training"]),
            output=OutputPaths(**parsed["output"]),
        )
    except DftnError as e:
        raise ConfigurationError(str(e)) from e
    validate_run_config(config)
    return config


def validate_run_config(config: RunConfig) -> None:
    """
    Raises:
        ConfigurationError: out-of-range seeds or an unknown fusion mode
    """
    if not 0 <= config.fusion.phi_seed <= MAX_PHI_SEED:
        raise ConfigurationError(
            f"phi seed must fit in an unsigned 32-bit integer, got {config.fusion.phi_seed}"
        )
    if config.training.seed < 0:
        raise ConfigurationError(f"seed must be >= 0, got {config.training.seed}")
    modes = [mode.value for mode in FusionMode]
    if config.fusion.mode not in modes:
        raise ConfigurationError(f"fusion mode must be one of {modes}, got '{config.fusion.mode}'")
    for xi in config.output.xi_sweep:
        if not xi > 0:
            raise ConfigurationError(f"xi sweep values must be positive, got {xi}")


def _read_file(path: Union[str, Path]) -> Dict[str, Dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, "r", encoding="utf-8") as f:
            parser.read_file(f)
    except OSError as e:
        raise UsageError(f"cannot read config file {path}: {e.strerror}") from e
    except configparser.Error as e:
        raise ConfigurationError(f"invalid config file {path}: {e}") from e

    sections: Dict[str, Dict[str, str]] = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigurationError(f"{path}: unknown section [{section}]")
        known = SECTIONS[section]
        for key, value in parser.items(section):
            if key not in known:
                raise ConfigurationError(f"{path}: unknown key '{key}' in [{section}]")
            sections.setdefault(section, {})[key] = value
    return sections


def resolve_run_config(
    file: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    Merge defaults, an optional INI file and flag overrides.

    Args:
        file: INI file given with ``--config``
        overrides: ``"section.key"`` to typed value; ``None`` values are ignored
            so unset flags never mask the file

    Raises:
        ConfigurationError: unknown keys or values that do not parse
    """
    sections = to_sections(RunConfig())
    if file is not None:
        for section, values in _read_file(file).items():
            sections[section].update(values)
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        section, _, key = dotted.partition(".")
        if section not in SECTIONS or key not in SECTIONS[section]:
            raise ConfigurationError(f"unknown setting '{dotted}'")
        sections[section][key] = _format(value)
    return _from_sections(sections)


def write_run_config(config: RunConfig, path: Union[str, Path]) -> None:
    parser = configparser.ConfigParser(interpolation=None)
    for section, values in to_sections(config).items():
        parser[section] = values
    with open(path, "w", encoding="utf-8") as f:
        parser.write(f)
