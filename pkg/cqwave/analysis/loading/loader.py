"""Data loader for reading run tables into DataFrames."""

from pathlib import Path
from typing import Optional

import polars as pl

from cqwave.analysis.export.snapshot import Snapshot, read_snapshot
from cqwave.analysis.loading.utils import FINAL_SNAPSHOT


class RunData:
    """Lazy access to the tables and final snapshot of one run directory."""

    def __init__(self, run_path: Path | str):
        self.run_path = Path(run_path)
        self.run_id = self.run_path.name
        self._tables: dict[str, pl.DataFrame] = {}
        self._snapshot: Optional[Snapshot] = None

    def table(self, name: str) -> pl.DataFrame:
        """Load ``<name>.csv``, skipping the ``#`` header comment."""
        if name not in self._tables:
            self._tables[name] = pl.read_csv(
                self.run_path / f"{name}.csv", comment_prefix="#"
            )
        return self._tables[name]

    def header(self, name: str) -> str:
        """The comment line (seed and domain) of ``<name>.csv``."""
        with open(self.run_path / f"{name}.csv", encoding="utf-8") as f:
            return f.readline().removeprefix("#").strip()

    @property
    def trajectory(self) -> pl.DataFrame:
        return self.table("trajectory")

    @property
    def solve_summary(self) -> pl.DataFrame:
        return self.table("solve_summary")

    @property
    def verify(self) -> pl.DataFrame:
        return self.table("verify")

    @property
    def constants_scan(self) -> pl.DataFrame:
        return self.table("constants_scan")

    @property
    def snapshot(self) -> Snapshot:
        if self._snapshot is None:
            self._snapshot = read_snapshot(self.run_path / FINAL_SNAPSHOT)
        return self._snapshot

    def __repr__(self) -> str:
        return f"RunData(run_path='{self.run_path}', run_id='{self.run_id}')"
