"""Coordinates the files written into one run directory."""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from cqwave.analysis.export.snapshot import write_snapshot
from cqwave.analysis.export.streaming_writer import StreamingTableWriter
from cqwave.core.grid import ComplexField, Grid

logger = logging.getLogger(__name__)

FINAL_SNAPSHOT = "final.cqwf"


def header_comment(seed: int, grid: Optional[Grid] = None) -> str:
    domain = grid.describe() if grid is not None else "no spatial grid"
    return f"seed={seed} {domain}"


class RunExporter:
    """Writes tables, snapshots and run metadata of a single command."""

    def __init__(
        self,
        output_dir: Path,
        seed: int,
        command: str,
        grid: Optional[Grid] = None,
        parquet: bool = False,
    ):
        """
        Args:
            output_dir: Directory receiving all files
            seed: Run seed, recorded in every table header
            command: Subcommand name, recorded in the metadata
            grid: Domain recorded in table headers
            parquet: Also write Parquet copies of tables
        """
        self.output_dir = Path(output_dir)
        self.seed = seed
        self.command = command
        self.grid = grid
        self.parquet = parquet
        self.writers: Dict[str, StreamingTableWriter] = {}
        self.start_time = datetime.now()
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def writer(self, table: str, filename: Optional[str] = None) -> StreamingTableWriter:
        if table not in self.writers:
            self.writers[table] = StreamingTableWriter(
                self.output_dir / (filename or f"{table}.csv"),
                table,
                header_comment(self.seed, self.grid),
                parquet=self.parquet,
            )
        return self.writers[table]

    def write_table(
        self, table: str, rows: Iterable[Dict[str, Any]], filename: Optional[str] = None
    ) -> Path:
        writer = self.writer(table, filename)
        writer.write_rows(list(rows))
        writer.close()
        return writer.filepath

    def save_snapshot(
        self, psi: ComplexField, A: float, c: float, filename: str = FINAL_SNAPSHOT
    ) -> Path:
        path = write_snapshot(self.output_dir / filename, psi, A, c)
        logger.info("wrote snapshot %s", path)
        return path

    def finalize(self, extra: Optional[Dict[str, Any]] = None) -> None:
        """Close all writers and write metadata.json."""
        for writer in self.writers.values():
            writer.close()
        metadata = {
            "command": self.command,
            "seed": self.seed,
            "domain": header_comment(self.seed, self.grid),
            "tables": sorted(w.filepath.name for w in self.writers.values()),
            "start_time": self.start_time.isoformat(),
            "end_time": datetime.now().isoformat(),
        }
        if extra:
            metadata.update(extra)
        with open(self.output_dir / "metadata.json", "w") as f:
            json.dump(metadata, f, indent=2)
