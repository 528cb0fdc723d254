"""
``dftn selftest``: run the built-in property suites.
"""

from typing import Annotated

import typer

from dftn.constants import DEFAULT_SEED
from dftn.errors import DftnError, UsageError
from dftn.logging import get_logger
from dftn.selftest import run_selftest
from dftn.utils.console import console, create_table, success

from .shared import command_errors

logger = get_logger("dftn.commands.selftest")


def selftest(
    seed: Annotated[int, typer.Option("--seed", help="Seed of the random cases")] = DEFAULT_SEED,
    scale: Annotated[
        int, typer.Option("--scale", help="Multiply the number of cases per suite")
    ] = 1,
):
    """Check quantizer, kernel, batch-norm, fusion and gradient properties"""
    with command_errors(logger, "Selftest"):
        if scale < 1:
            raise UsageError(f"--scale must be positive, got {scale}")
        results = run_selftest(seed, scale)
        table = create_table("Self-test", ["suite", "cases", "failures", "time", "result"])
        for result in results:
            table.add_row(
                result.name,
                str(result.cases),
                str(result.failures),
                f"{result.seconds:.2f} s",
                "[green]pass[/green]" if result.passed else "[red]FAIL[/red]",
            )
        console.print(table)
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise DftnError(f"suites failed: {', '.join(failed)}")
        success(f"All {len(results)} suites passed")
