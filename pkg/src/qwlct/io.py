"""File formats: QF2D fields, QWM4 maps, CSV import/export, 16-bit PGM.

Binary layouts are little-endian with fixed headers:

QF2D  ``magic "QF2D" | u16 version=1 | u32 n1 | u32 n2 | f64 x0_1 | f64 x0_2 |
f64 dx1 | f64 dx2`` followed by ``n1*n2*4`` f64 samples, row-major, components
``(s, x, y, z)``.

QWM4  ``magic "QWM4" | u16 version=1 | u32 m1 | u32 m2 | u32 p1 | u32 p2 |``
w-grid ``x0_1, x0_2, dx1, dx2`` | u-grid ``x0_1, x0_2, dx1, dx2`` (all f64)
followed by ``m1*m2*p1*p2*4`` f64 samples in ``(iw1, iw2, iu1, iu2, c)`` order.
"""
from __future__ import annotations

import csv
import math
import struct
from pathlib import Path

import numpy as np

from .errors import (BadMagic, BadVersion, DuplicatePoint, FormatError, MissingPoint,
                     NonFiniteSample, ParseError, TruncatedPayload)
from .field import Grid2D, QField2D
from .qwlct import QWLCTMap

VERSION = 1
FIELD_MAGIC = b"QF2D"
MAP_MAGIC = b"QWM4"
FIELD_HEADER = struct.Struct("<4sHII4d")
MAP_HEADER = struct.Struct("<4sH4I8d")
CSV_COLUMNS = ["i1", "i2", "s", "x", "y", "z"]


def _payload(buf: bytes, offset: int, count: int, what: str) -> np.ndarray:
    need = count * 8
    have = len(buf) - offset
    if have < need:
        raise TruncatedPayload(f"{what}: payload has {have} bytes, header implies {need}")
    if have > need:
        raise FormatError(f"{what}: {have - need} trailing bytes after payload")
    return np.frombuffer(buf, dtype="<f8", count=count, offset=offset).astype(float)


def _header(buf: bytes, layout: struct.Struct, magic: bytes, what: str) -> tuple:
    if buf[:4] != magic:
        raise BadMagic(f"{what}: expected magic {magic!r}, found {bytes(buf[:4])!r}")
    if len(buf) < layout.size:
        raise TruncatedPayload(f"{what}: header needs {layout.size} bytes, file has {len(buf)}")
    fields = layout.unpack_from(buf)
    if fields[1] != VERSION:
        raise BadVersion(f"{what}: unsupported version {fields[1]}")
    return fields


def field_to_bytes(f: QField2D) -> bytes:
    g = f.grid
    head = FIELD_HEADER.pack(FIELD_MAGIC, VERSION, g.n[0], g.n[1], *g.x0, *g.dx)
    return head + np.ascontiguousarray(f.data, dtype="<f8").tobytes()


def field_from_bytes(buf: bytes, what: str = "field") -> QField2D:
    _, _, n1, n2, o1, o2, d1, d2 = _header(buf, FIELD_HEADER, FIELD_MAGIC, what)
    data = _payload(buf, FIELD_HEADER.size, n1 * n2 * 4, what)
    if not np.all(np.isfinite(data)):
        raise NonFiniteSample(f"{what}: payload contains NaN or Inf")
    return QField2D(Grid2D((o1, o2), (d1, d2), (n1, n2)), data.reshape(n1, n2, 4))


def write_field(f: QField2D, path) -> None:
    Path(path).write_bytes(field_to_bytes(f))


def read_field(path) -> QField2D:
    return field_from_bytes(Path(path).read_bytes(), str(path))


def map_to_bytes(G: QWLCTMap) -> bytes:
    w, u = G.wgrid, G.ugrid
    head = MAP_HEADER.pack(MAP_MAGIC, VERSION, *w.n, *u.n, *w.x0, *w.dx, *u.x0, *u.dx)
    return head + np.ascontiguousarray(G.data, dtype="<f8").tobytes()


def map_from_bytes(buf: bytes, what: str = "map") -> QWLCTMap:
    fields = _header(buf, MAP_HEADER, MAP_MAGIC, what)
    m1, m2, p1, p2 = fields[2:6]
    wo1, wo2, wd1, wd2, uo1, uo2, ud1, ud2 = fields[6:]
    data = _payload(buf, MAP_HEADER.size, m1 * m2 * p1 * p2 * 4, what)
    if not np.all(np.isfinite(data)):
        raise NonFiniteSample(f"{what}: payload contains NaN or Inf")
    wgrid = Grid2D((wo1, wo2), (wd1, wd2), (m1, m2))
    ugrid = Grid2D((uo1, uo2), (ud1, ud2), (p1, p2))
    return QWLCTMap(wgrid, ugrid, data.reshape(m1, m2, p1, p2, 4))


def write_map(G: QWLCTMap, path) -> None:
    Path(path).write_bytes(map_to_bytes(G))


def read_map(path) -> QWLCTMap:
    return map_from_bytes(Path(path).read_bytes(), str(path))


def import_csv(path, grid: Grid2D) -> QField2D:
    """Assemble a field from rows ``i1,i2,s,x,y,z``.

    Every lattice index must appear exactly once; an optional header row
    naming the columns is accepted.
    """
    data = np.zeros(grid.n + (4,))
    seen = np.zeros(grid.n, dtype=bool)
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            cells = [c.strip() for c in row]
            if lineno == 1 and cells == CSV_COLUMNS:
                continue
            if len(cells) != 6:
                raise ParseError(f"{path}:{lineno}: expected 6 columns, got {len(cells)}")
            try:
                i1, i2 = int(cells[0]), int(cells[1])
                vals = [float(c) for c in cells[2:]]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if not (0 <= i1 < grid.n[0] and 0 <= i2 < grid.n[1]):
                raise ParseError(f"{path}:{lineno}: index ({i1}, {i2}) outside grid {grid.n}")
            if not all(math.isfinite(v) for v in vals):
                raise NonFiniteSample(f"{path}:{lineno}: non-finite sample")
            if seen[i1, i2]:
                raise DuplicatePoint(f"{path}:{lineno}: lattice point ({i1}, {i2}) given twice")
            seen[i1, i2] = True
            data[i1, i2] = vals
    if not seen.all():
        i1, i2 = np.argwhere(~seen)[0]
        raise MissingPoint(f"{path}: {int((~seen).sum())} lattice points missing, first ({i1}, {i2})")
    return QField2D(grid, data)


def export_csv(f: QField2D, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for i1 in range(f.grid.n[0]):
            for i2 in range(f.grid.n[1]):
                w.writerow([i1, i2, *(repr(float(v)) for v in f.data[i1, i2])])


def export_magnitude_pgm(values, path) -> tuple[float, float]:
    """Write a 16-bit binary PGM with linear min-max scaling.

    Rows of the image are the first array axis.  The scaling constants go
    into a comment line and are returned.  A constant slice maps to zeros.
    """
    a = np.asarray(values, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise FormatError(f"expected a non-empty 2D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteSample("slice contains NaN or Inf")
    lo, hi = float(a.min()), float(a.max())
    if hi > lo:
        pix = np.rint((a - lo) / (hi - lo) * 65535.0)
    else:
        pix = np.zeros_like(a)
    head = f"P5\n# min={lo!r} max={hi!r}\n{a.shape[1]} {a.shape[0]}\n65535\n".encode("ascii")
    Path(path).write_bytes(head + pix.astype(">u2").tobytes())
    return lo, hi
