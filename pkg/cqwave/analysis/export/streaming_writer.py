"""Streaming CSV writer with batched writes and an optional Parquet copy."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from cqwave.analysis.export import schema

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


class StreamingTableWriter:
    """Write rows of one table to CSV in batches.

    The file starts with a ``#`` comment line, then the header row. Floats use
    17 significant digits and lines end in LF, so identical rows give
    identical bytes.
    """

    def __init__(
        self,
        filepath: Path,
        table: str,
        comment: str,
        batch_size: int = 1000,
        parquet: bool = False,
    ):
        """
        Args:
            filepath: Path of the CSV file
            table: Name of the table in ``schema.TABLES``
            comment: Text of the leading ``#`` line
            batch_size: Number of rows to buffer before writing
            parquet: Also write ``<stem>.parquet`` when pyarrow is available
        """
        self.filepath = Path(filepath)
        self.table = table
        self.columns = schema.columns(table)
        self.batch_size = batch_size
        self.buffer: List[Dict[str, Any]] = []
        self._started = False
        self._comment = comment
        self._parquet_writer: Optional[Any] = None
        self._parquet = parquet and self._pyarrow_available()

    @staticmethod
    def _pyarrow_available() -> bool:
        try:
            import pyarrow  # noqa: F401
        except ImportError:
            logger.warning("pyarrow is not installed; skipping Parquet output")
            return False
        return True

    def write_row(self, row: Dict[str, Any]) -> None:
        self.buffer.append(row)
        if len(self.buffer) >= self.batch_size:
            self.flush()

    def write_rows(self, rows: List[Dict[str, Any]]) -> None:
        for row in rows:
            self.write_row(row)

    def _frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.buffer, columns=self.columns)
        for name, kind in schema.TABLES[self.table].items():
            if kind == schema.STRING:
                frame[name] = frame[name].fillna("").astype(str)
        return frame

    def _start(self) -> None:
        self.filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(self.filepath, "w", encoding="utf-8", newline="") as f:
            f.write(f"# {self._comment}\n")
            f.write(",".join(self.columns) + "\n")
        self._started = True

    def flush(self) -> None:
        if not self._started:
            self._start()
        if not self.buffer:
            return
        frame = self._frame()
        with open(self.filepath, "a", encoding="utf-8", newline="") as f:
            frame.to_csv(
                f,
                header=False,
                index=False,
                float_format=FLOAT_FORMAT,
                lineterminator="\n",
            )
        if self._parquet:
            self._write_parquet(frame)
        self.buffer = []

    def _write_parquet(self, frame: pd.DataFrame) -> None:
        import pyarrow as pa
        import pyarrow.parquet as pq

        arrow_schema = schema.arrow_schema(self.table)
        table = pa.Table.from_pandas(frame, schema=arrow_schema, preserve_index=False)
        if self._parquet_writer is None:
            self._parquet_writer = pq.ParquetWriter(
                self.filepath.with_suffix(".parquet"), arrow_schema, compression="snappy"
            )
        self._parquet_writer.write_table(table)

    def close(self) -> None:
        """Flush remaining rows; an empty table still gets its header."""
        self.flush()
        if self._parquet_writer is not None:
            self._parquet_writer.close()
            self._parquet_writer = None

    def __enter__(self) -> "StreamingTableWriter":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()
