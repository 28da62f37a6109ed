"""
Field snapshots.

Binary layout (little endian), a 16 byte header followed by the payload:

    offset  size  field
    0       4     magic b"HFLD"
    4       2     version (1)
    6       1     kind: 0 potential, 1 form
    7       1     reserved (0)
    8       4     n, complex dimension
    12      4     N, points per real axis

A potential stores N^(2n) float64 values in row-major order over the axes
(x1, y1, ..., xn, yn). A form stores the n x n complex128 background and
then the complex128 Hessian part, row-major over the grid axes followed by
the (j, k) entry axes.
"""

import io
import struct
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from core.atomic import PathLike, atomic_write_bytes, atomic_write_text
from core.errors import DomainError
from spectra import HermitianMatrix
from .grid import FormField, PotentialField, TorusGrid

MAGIC = b"HFLD"
VERSION = 1
HEADER = struct.Struct("<4sHBBII")
KIND_POTENTIAL = 0
KIND_FORM = 1
CSV_MAX_POINTS = 1 << 16

Field = Union[PotentialField, FormField]


def encode_snapshot(field: Field) -> bytes:
    grid = field.grid
    buffer = io.BytesIO()
    if isinstance(field, PotentialField):
        buffer.write(HEADER.pack(MAGIC, VERSION, KIND_POTENTIAL, 0, grid.n, grid.N))
        buffer.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())
    else:
        buffer.write(HEADER.pack(MAGIC, VERSION, KIND_FORM, 0, grid.n, grid.N))
        buffer.write(np.ascontiguousarray(field.background.entries, dtype="<c16").tobytes())
        buffer.write(np.ascontiguousarray(field.hessian, dtype="<c16").tobytes())
    return buffer.getvalue()


def decode_snapshot(payload: bytes) -> Field:
    if len(payload) < HEADER.size:
        raise DomainError("snapshot shorter than its header")
    magic, version, kind, _, n, N = HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise DomainError(f"not a field snapshot (magic {magic!r})")
    if version != VERSION:
        raise DomainError(f"unsupported snapshot version {version}")
    grid = TorusGrid(n, N)
    body = memoryview(payload)[HEADER.size:]
    if kind == KIND_POTENTIAL:
        expected = grid.size * 8
        if len(body) != expected:
            raise DomainError(f"potential payload has {len(body)} bytes, expected {expected}")
        return PotentialField(grid, np.frombuffer(body, dtype="<f8").reshape(grid.shape))
    if kind == KIND_FORM:
        head = n * n * 16
        expected = head + grid.size * head
        if len(body) != expected:
            raise DomainError(f"form payload has {len(body)} bytes, expected {expected}")
        background = np.frombuffer(body[:head], dtype="<c16").reshape(n, n)
        hessian = np.frombuffer(body[head:], dtype="<c16").reshape(grid.shape + (n, n))
        return FormField(grid, HermitianMatrix.from_array(background), hessian)
    raise DomainError(f"unknown snapshot kind {kind}")


def write_snapshot(path: PathLike, field: Field) -> Path:
    return atomic_write_bytes(path, encode_snapshot(field))


def read_snapshot(path: PathLike) -> Field:
    return decode_snapshot(Path(path).read_bytes())


def snapshot_frame(field: Field) -> pd.DataFrame:
    """One row per grid point: the coordinates, then the value (or the matrix entries)"""
    grid = field.grid
    if grid.size > CSV_MAX_POINTS:
        raise DomainError(f"grid of {grid.size} points is too large for CSV; use the binary snapshot")
    x, y = grid.coordinates()
    columns = {}
    for j in range(grid.n):
        columns[f"x{j + 1}"] = x[j].ravel()
        columns[f"y{j + 1}"] = y[j].ravel()
    if isinstance(field, PotentialField):
        columns["value"] = field.values.ravel()
    else:
        matrices = field.matrices.reshape(grid.size, grid.n, grid.n)
        for j in range(grid.n):
            for k in range(grid.n):
                columns[f"m{j + 1}{k + 1}_re"] = matrices[:, j, k].real
                columns[f"m{j + 1}{k + 1}_im"] = matrices[:, j, k].imag
    return pd.DataFrame(columns)


def write_snapshot_csv(path: PathLike, field: Field) -> Path:
    return atomic_write_text(path, snapshot_frame(field).to_csv(index=False, float_format="%.17g"))


def read_potential_csv(path: PathLike, grid: TorusGrid) -> PotentialField:
    frame = pd.read_csv(path, float_precision="round_trip")
    if "value" not in frame.columns or len(frame) != grid.size:
        raise DomainError(f"{path} does not hold a potential on {grid}")
    return PotentialField(grid, frame["value"].to_numpy().reshape(grid.shape))
