"""
Console output shared by the commands.

Status lines and tables go to stdout through one rich ``Console``; log
records go to stderr and the log file.
"""

from numbers import Real
from typing import Sequence

import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table

console = Console()


def _status(symbol: str, message: str, style: str) -> None:
    console.print(f"{symbol} {message}".lstrip(), style=style)


def success(message: str):
    _status("✔", message, "bold green")


def error(message: str):
    _status("✖", message, "bold red")


def warning(message: str):
    _status("⚠ ", message, "bold yellow")


def info(message: str):
    _status("", message, "cyan")


def create_table(title: str, columns: Sequence[str]) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for column in columns:
        table.add_column(column)
    return table


def _cell(value, digits: int) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Real):
        return f"{float(value):.{digits}f}"
    return str(value)


def frame_table(title: str, frame: pd.DataFrame, digits: int = 4) -> Table:
    """One table row per frame row; integers stay exact, reals get ``digits`` decimals"""
    table = create_table(title, [str(c) for c in frame.columns])
    for row in frame.itertuples(index=False):
        table.add_row(*[_cell(value, digits) for value in row])
    return table


def confusion_table(matrix, class_names: Sequence[str]) -> Table:
    """Confusion matrix with true classes as rows and predictions as columns"""
    table = create_table("Confusion matrix", ["true \\ pred", *class_names])
    for name, row in zip(class_names, matrix):
        table.add_row(name, *[str(int(v)) for v in row])
    return table
