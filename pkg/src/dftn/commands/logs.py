"""
``dftn logs``: inspect and prune the application log.
"""

from datetime import datetime
from typing import Optional

import typer
from rich.syntax import Syntax
from rich.table import Table

from dftn.constants import LOG_APP_NAME, LOG_LINES_TO_SHOW
from dftn.logging import (
    cleanup_old_logs,
    format_size,
    get_log_config,
    get_log_directory,
    get_log_file_path,
    get_logger,
    rotated_logs,
)
from dftn.utils.console import console, error, info, success, warning

app = typer.Typer(help=f"Inspect {LOG_APP_NAME} logs")
logger = get_logger("dftn.commands.logs")


@app.command("show")
def show_logs(
    lines: int = typer.Option(LOG_LINES_TO_SHOW, "--lines", "-n", help="Number of lines to show"),
    level: Optional[str] = typer.Option(
        None, "--level", help="Only lines of this level (DEBUG, INFO, WARNING, ERROR)"
    ),
) -> None:
    """Show the most recent log entries"""
    try:
        log_file = get_log_file_path()
        if not log_file.exists():
            warning(f"No log file yet. Run a {LOG_APP_NAME} command to create one.")
            return

        with open(log_file, "r", encoding="utf-8") as f:
            entries = f.readlines()
        if level:
            tag = level.upper()
            entries = [line for line in entries if tag in line]
        selected = entries[-lines:] if lines > 0 else []
        if not selected:
            info("No log entries match.")
            return
        console.print(Syntax("".join(selected), "log", theme="monokai", line_numbers=False))
    except OSError as e:
        logger.error(f"Failed to show logs: {e}")
        error(f"Failed to show logs: {e}")
        raise typer.Exit(1)


@app.command("info")
def log_info() -> None:
    """Show where logs go and how they rotate"""
    config = get_log_config()
    log_dir = get_log_directory()
    log_file = get_log_file_path(config)

    table = Table(title=f"{LOG_APP_NAME} log", show_header=True, header_style="bold blue")
    table.add_column("Setting", style="cyan", no_wrap=True)
    table.add_column("Value", style="white")
    table.add_row("Directory", str(log_dir))
    table.add_row("File", str(log_file))
    table.add_row("File level", config.default_level.value)
    table.add_row("Console level", config.console_level.value)
    table.add_row("Rotation", "daily at midnight")
    table.add_row("Retention", f"{config.log_retention_days} days")
    if log_file.exists():
        stat = log_file.stat()
        table.add_row("Size", format_size(stat.st_size))
        table.add_row(
            "Last modified", datetime.fromtimestamp(stat.st_mtime).strftime("%Y-%m-%d %H:%M:%S")
        )
    else:
        table.add_row("Size", "no file yet")
    table.add_row("Rotated files", str(len(rotated_logs(log_dir))))
    console.print(table)


@app.command("clean")
def clean_logs(
    days: Optional[int] = typer.Option(
        None, "--days", help="Remove rotated files older than this (default: retention)"
    ),
) -> None:
    """Delete rotated log files past the retention window"""
    retention = get_log_config().log_retention_days if days is None else days
    if retention < 0:
        error("--days must be >= 0")
        raise typer.Exit(2)
    removed = cleanup_old_logs(get_log_directory(), retention)
    logger.info(f"Removed {removed} rotated log files older than {retention} days")
    success(f"Removed {removed} rotated log file(s)")
