"""Utilities for discovering runs and the snapshots they hold."""

import os
from datetime import datetime
from pathlib import Path
from typing import Optional

from cqwave.analysis.export.exporter import FINAL_SNAPSHOT
from cqwave.core.errors import ConfigError

RUN_PATH_ENV = "CQWAVE_RUN_PATH"


class NoRunsFoundError(ConfigError):
    """Raised when no run directory can be found."""


def get_runs_directory(base_path: Optional[Path | str] = None) -> Path:
    return Path("runs") if base_path is None else Path(base_path)


def new_run_directory(base_path: Optional[Path | str] = None) -> Path:
    """runs/run_YYYYMMDD_HHMMSS for the current time."""
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return get_runs_directory(base_path) / f"run_{stamp}"


def parse_run_timestamp(run_dir: Path) -> Optional[datetime]:
    """Timestamp of a run_YYYYMMDD_HHMMSS directory, or None."""
    name = run_dir.name
    if not name.startswith("run_"):
        return None
    try:
        return datetime.strptime(name[4:], "%Y%m%d_%H%M%S")
    except ValueError:
        return None


def find_most_recent_run(base_path: Optional[Path | str] = None) -> Path:
    """Most recent run directory by the timestamp in its name.

    Raises:
        NoRunsFoundError: no directory matches run_YYYYMMDD_HHMMSS
    """
    runs_dir = get_runs_directory(base_path)
    if not runs_dir.exists():
        raise NoRunsFoundError(
            f"Runs directory not found: {runs_dir}\n"
            "Run 'cqwave solve' to create one, or pass a snapshot path."
        )
    stamped = {
        item: ts
        for item in runs_dir.iterdir()
        if item.is_dir() and (ts := parse_run_timestamp(item)) is not None
    }
    if not stamped:
        raise NoRunsFoundError(
            f"No valid runs found in: {runs_dir}\n"
            "Expected directory pattern: run_YYYYMMDD_HHMMSS"
        )
    return max(stamped, key=stamped.__getitem__)


def get_snapshot_path_with_fallback(
    explicit: Optional[Path | str] = None,
    env_var: str = RUN_PATH_ENV,
    base_path: Optional[Path | str] = None,
) -> Path:
    """Snapshot to read when a command was given none.

    Precedence: the explicit path, then the environment variable (a snapshot
    file or a run directory), then final.cqwf of the most recent run.

    Raises:
        NoRunsFoundError: nothing given and no run found
    """
    if explicit is not None:
        return Path(explicit)
    env_path = os.getenv(env_var)
    if env_path:
        path = Path(env_path)
        return path / FINAL_SNAPSHOT if path.is_dir() else path
    return find_most_recent_run(base_path) / FINAL_SNAPSHOT
