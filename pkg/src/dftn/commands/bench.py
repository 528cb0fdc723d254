"""
``dftn bench``: dense float32 convolution against the packed popcount kernel.

Every case checks that both paths agree exactly before timing them. Timings
are informational; memory ratios come from the layer accounting of the
default network.
"""

import time
from typing import Annotated, Callable, List, NamedTuple, Optional

import numpy as np
import typer

from dftn.bitpack import conv1d_packed, pack_ternary
from dftn.constants import CONV_FILTERS, CONV_KERNELS, DEFAULT_SEED, DEFAULT_WINDOW_T
from dftn.core.conv import conv1d_forward
from dftn.errors import DftnError, UsageError
from dftn.logging import get_logger
from dftn.model.network import NetworkConfig, layer_summary
from dftn.utils.console import console, create_table, success

from .shared import command_errors

logger = get_logger("dftn.commands.bench")

OPPORTUNITY_SENSORS = 63


class ConvCase(NamedTuple):
    channels_in: int
    channels_out: int
    kernel: int
    length: int


class BenchResult(NamedTuple):
    case: ConvCase
    exact: bool
    dense_seconds: float
    packed_seconds: float

    @property
    def speedup(self) -> float:
        return self.dense_seconds / self.packed_seconds if self.packed_seconds > 0 else float("inf")


def default_cases(window_t: int = DEFAULT_WINDOW_T) -> List[ConvCase]:
    """The three conv blocks of the default network at their input lengths"""
    lengths = NetworkConfig(num_classes=2, window_t=window_t).time_lengths()
    c_in = [1] + list(CONV_FILTERS[:-1])
    return [
        ConvCase(c_in[i], CONV_FILTERS[i], CONV_KERNELS[i], lengths[i][0] + CONV_KERNELS[i] - 1)
        for i in range(len(CONV_KERNELS))
    ]


def parse_cases(text: str) -> List[ConvCase]:
    """
    ``"C_IN x C_OUT x KH x T"`` items separated by commas.

    Raises:
        UsageError: malformed items or non-positive sizes
    """
    cases = []
    for item in text.split(","):
        parts = item.strip().lower().split("x")
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise UsageError(f"size '{item}' is not of the form C_INxC_OUTxKHxT") from None
        if len(values) != 4:
            raise UsageError(f"size '{item}' needs four numbers: C_INxC_OUTxKHxT")
        if min(values) < 1:
            raise UsageError(f"size '{item}' has a zero or negative dimension")
        case = ConvCase(*values)
        if case.kernel > case.length:
            raise UsageError(f"size '{item}': kernel {case.kernel} exceeds length {case.length}")
        cases.append(case)
    return cases


def _best_time(run: Callable[[], np.ndarray], repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        run()
        best = min(best, time.perf_counter() - started)
    return best


def bench_case(case: ConvCase, batch: int, repeat: int, rng: np.random.Generator) -> BenchResult:
    """Time one case; the packed timing includes packing the input activations"""
    grid = np.array([-0.5, 0.0, 0.5], dtype=np.float32)
    x = rng.choice(grid, size=(batch, case.channels_in, case.length))
    k = rng.choice(grid, size=(case.channels_out, case.channels_in, case.kernel))
    alpha = float(rng.uniform(0.1, 1.0))
    kernel = pack_ternary(k, alpha)

    def dense() -> np.ndarray:
        return conv1d_forward(x, k) * np.float32(alpha)

    def packed() -> np.ndarray:
        return conv1d_packed(pack_ternary(x), kernel)

    exact = bool(np.array_equal(dense(), packed()))
    return BenchResult(case, exact, _best_time(dense, repeat), _best_time(packed, repeat))


def bench(
    sizes: Annotated[
        Optional[str],
        typer.Option("--sizes", help="Cases as C_INxC_OUTxKHxT, comma-separated"),
    ] = None,
    batch: Annotated[int, typer.Option("--batch", help="Sequences per case")] = 64,
    repeat: Annotated[int, typer.Option("--repeat", help="Timed runs per path")] = 3,
    sensors: Annotated[
        int, typer.Option("--sensors", help="Sensor channels for the memory table")
    ] = OPPORTUNITY_SENSORS,
    seed: Annotated[int, typer.Option("--seed", help="Operand seed")] = DEFAULT_SEED,
):
    """Compare dense and packed convolution time and verify they agree exactly"""
    with command_errors(logger, "Benchmark"):
        if batch < 1 or repeat < 1 or sensors < 1:
            raise UsageError("--batch, --repeat and --sensors must be positive")
        cases = parse_cases(sizes) if sizes else default_cases()
        rng = np.random.default_rng(seed)
        results = [bench_case(case, batch, repeat, rng) for case in cases]

        table = create_table(
            "Dense vs packed conv",
            ["c_in", "c_out", "kh", "T", "exact", "dense", "packed", "speedup"],
        )
        for r in results:
            table.add_row(
                *[str(v) for v in r.case],
                "yes" if r.exact else "NO",
                f"{r.dense_seconds * 1e3:.2f} ms",
                f"{r.packed_seconds * 1e3:.2f} ms",
                f"{r.speedup:.2f}x",
            )
            logger.info(
                f"bench {tuple(r.case)}: exact={r.exact} dense={r.dense_seconds:.6f}s "
                f"packed={r.packed_seconds:.6f}s"
            )
        console.print(table)

        memory = create_table(
            f"Weight memory ({sensors} sensor channels)",
            ["layer", "params", "32-bit", "packed", "ratio"],
        )
        for info in layer_summary(NetworkConfig(num_classes=2), sensors):
            memory.add_row(
                info.name,
                str(info.params),
                str(info.dense_bytes),
                str(info.packed_bytes),
                f"{info.compression:.1f}x",
            )
        console.print(memory)

        if not all(r.exact for r in results):
            raise DftnError("packed and dense convolution disagree")
        success(f"All {len(results)} cases agree exactly")
