"""CQWF binary snapshots of fields on Dirichlet slabs.

Layout (little-endian): magic ``CQWF``, version byte, u8 d, u64 n1, u64 nt
repeated d - 1 times, f64 N, L, A, c, then the complex values as
interleaved (re, im) f64 pairs, row-major with x1 slowest.
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from cqwave.core.errors import SnapshotFormatError
from cqwave.core.grid import ComplexField, make_grid

MAGIC = b"CQWF"
VERSION = 1
VALUE_DTYPE = np.dtype("<c16")


@dataclass(frozen=True, eq=False)
class Snapshot:
    field: ComplexField
    A: float
    c: float


def encode_snapshot(psi: ComplexField, A: float, c: float) -> bytes:
    grid = psi.grid
    if grid.periodic_x1:
        raise SnapshotFormatError("snapshots store Dirichlet slabs only")
    header = MAGIC + struct.pack("<BB", VERSION, grid.d)
    header += struct.pack("<Q", grid.n1) + struct.pack("<Q", grid.nt) * (grid.d - 1)
    header += struct.pack("<4d", grid.N, grid.L, A, c)
    return header + np.ascontiguousarray(psi.values, dtype=VALUE_DTYPE).tobytes()


def decode_snapshot(data: bytes) -> Snapshot:
    if data[:4] != MAGIC:
        raise SnapshotFormatError(f"bad magic {data[:4]!r}")
    if len(data) < 6:
        raise SnapshotFormatError("truncated header")
    version, d = struct.unpack_from("<BB", data, 4)
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    if d not in (2, 3):
        raise SnapshotFormatError(f"unsupported dimension {d}")
    offset = 6
    sizes_len = 8 * d
    if len(data) < offset + sizes_len + 32:
        raise SnapshotFormatError("truncated header")
    sizes = struct.unpack_from(f"<{d}Q", data, offset)
    offset += sizes_len
    N, L, A, c = struct.unpack_from("<4d", data, offset)
    offset += 32
    n1, nt = sizes[0], sizes[1]
    if any(n != nt for n in sizes[1:]):
        raise SnapshotFormatError(f"unequal transverse sizes {sizes[1:]}")
    grid = make_grid(d=d, N=N, L=L, n1=n1, nt=nt)
    count = int(np.prod(grid.shape))
    if len(data) - offset != count * VALUE_DTYPE.itemsize:
        raise SnapshotFormatError(
            f"expected {count} values, found {len(data) - offset} bytes"
        )
    values = np.frombuffer(data, dtype=VALUE_DTYPE, count=count, offset=offset)
    field = ComplexField(grid, values.reshape(grid.shape).astype(np.complex128))
    return Snapshot(field=field, A=A, c=c)


def write_snapshot(path: Path | str, psi: ComplexField, A: float, c: float) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_snapshot(psi, A, c))
    return path


def read_snapshot(path: Path | str) -> Snapshot:
    path = Path(path)
    if not path.is_file():
        raise SnapshotFormatError(f"snapshot not found: {path}")
    return decode_snapshot(path.read_bytes())
