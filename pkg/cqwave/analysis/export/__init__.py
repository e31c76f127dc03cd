"""Writing run tables (CSV, optional Parquet) and CQWF snapshots."""

from cqwave.analysis.export.exporter import FINAL_SNAPSHOT, RunExporter, header_comment
from cqwave.analysis.export.snapshot import (
    Snapshot,
    decode_snapshot,
    encode_snapshot,
    read_snapshot,
    write_snapshot,
)
from cqwave.analysis.export.streaming_writer import StreamingTableWriter

__all__ = [
    "FINAL_SNAPSHOT",
    "RunExporter",
    "Snapshot",
    "StreamingTableWriter",
    "decode_snapshot",
    "encode_snapshot",
    "header_comment",
    "read_snapshot",
    "write_snapshot",
]
