"""Run discovery; ``RunData`` needs the analysis extra (polars)."""

from cqwave.analysis.loading.utils import (
    NoRunsFoundError,
    find_most_recent_run,
    get_snapshot_path_with_fallback,
    new_run_directory,
)

__all__ = [
    "NoRunsFoundError",
    "find_most_recent_run",
    "get_snapshot_path_with_fallback",
    "new_run_directory",
]
