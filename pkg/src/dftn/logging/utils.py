"""
Helpers for log management.
"""

import time
from pathlib import Path
from typing import List

from dftn.constants import LOG_FILE_NAME, LOG_RETENTION_DAYS

_UNITS = ("B", "KB", "MB", "GB")
_SECONDS_PER_DAY = 86400


def format_size(size_bytes: int) -> str:
    """``512B``, ``1.5KB``, ``2.0MB``; gigabytes are the largest unit"""
    size = float(size_bytes)
    for unit in _UNITS[:-1]:
        if size < 1024:
            return f"{size_bytes}B" if unit == "B" else f"{size:.1f}{unit}"
        size /= 1024
    return f"{size:.1f}{_UNITS[-1]}"


def rotated_logs(log_directory: Path) -> List[Path]:
    """Rotated copies of the log, oldest first; the active file is not one of them"""
    if not log_directory.is_dir():
        return []
    # rotation suffixes are %Y-%m-%d dates, so name order is age order
    return sorted(log_directory.glob(f"{LOG_FILE_NAME}.log.*"))


def cleanup_old_logs(log_directory: Path, retention_days: int = LOG_RETENTION_DAYS) -> int:
    """
    Delete rotated logs last modified more than ``retention_days`` ago.

    Returns:
        int: Number of files removed
    """
    cutoff = time.time() - retention_days * _SECONDS_PER_DAY
    removed = 0
    for path in rotated_logs(log_directory):
        try:
            if path.stat().st_mtime < cutoff:
                path.unlink()
                removed += 1
        except OSError:
            continue
    return removed
