"""Occupancy grids, scalar fields, and their Netpbm/CSV serializations.

Cells are closed unit squares: cell (i, j) covers [i, i+1] x [j, j+1] with
its center at (i + 0.5, j + 0.5).  The i axis points right, the j axis points
UP, so raster row 0 of a PBM/PGM file is the top row of the image and maps to
j = height - 1.  A cell value of True means obstacle (opaque); PBM bit 1
(black) and PGM samples below the luminance cutoff are obstacles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ParseError",
    "GeometryError",
    "OccupancyGrid",
    "ScalarField",
    "parse_occupancy",
    "sniff_format",
    "load_occupancy",
    "generate_h_shape",
    "write_pbm",
    "bitmap_to_pbm",
    "write_field",
    "read_field_csv",
]

_FORMATS = ("pbm-ascii", "pbm-binary", "pgm-threshold")
_MAGIC_TO_FORMAT = {b"P1": "pbm-ascii", b"P4": "pbm-binary",
                    b"P2": "pgm-threshold", b"P5": "pgm-threshold"}


class ParseError(ValueError):
    """Malformed raster input; `offset` is the byte position of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class GeometryError(ValueError):
    """Requested fixture geometry cannot be laid out on the canvas."""


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Boolean obstacle raster, indexed cells[i, j] with j pointing up."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=bool)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ValueError("occupancy grid must be 2-D and non-empty")
        object.__setattr__(self, "cells", cells)

    @property
    def width(self) -> int:
        return self.cells.shape[0]

    @property
    def height(self) -> int:
        return self.cells.shape[1]

    def is_obstacle(self, i: int, j: int) -> bool:
        """Out-of-bounds cells count as obstacle (the frame is opaque)."""
        if 0 <= i < self.width and 0 <= j < self.height:
            return bool(self.cells[i, j])
        return True

    def open_count(self) -> int:
        return int(self.cells.size - np.count_nonzero(self.cells))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Per-cell float values; NaN marks cells where the value is undefined."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("scalar field must be 2-D and non-empty")
        object.__setattr__(self, "values", values)

    @property
    def width(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    def defined_mask(self) -> np.ndarray:
        return ~np.isnan(self.values)


class _Cursor:
    """Byte-level scanner for Netpbm headers and plain rasters."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def error(self, message: str, offset: int | None = None) -> ParseError:
        return ParseError(message, self.pos if offset is None else offset)

    def skip_space(self) -> None:
        # '#' starts a comment running to end of line; comments may appear
        # wherever whitespace may.
        data = self.data
        n = len(data)
        while self.pos < n:
            b = data[self.pos]
            if b in b" \t\r\n\v\f":
                self.pos += 1
            elif b == 0x23:  # '#'
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                return

    def read_uint(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        data = self.data
        while self.pos < len(data) and 0x30 <= data[self.pos] <= 0x39:
            self.pos += 1
        if self.pos == start:
            if start >= len(data):
                raise self.error(f"unexpected end of data reading {what}")
            raise self.error(f"expected {what}, found byte {data[start]!r}", start)
        return int(data[start:self.pos])

    def read_raster_separator(self) -> None:
        # Binary rasters begin after exactly one whitespace byte.
        if self.pos >= len(self.data):
            raise self.error("unexpected end of data before raster")
        if self.data[self.pos] not in b" \t\r\n\v\f":
            raise self.error("expected single whitespace before raster")
        self.pos += 1


def _read_dimensions(cur: _Cursor) -> tuple[int, int]:
    at = cur.pos
    width = cur.read_uint("width")
    if width == 0:
        raise cur.error("zero width", at)
    at = cur.pos
    height = cur.read_uint("height")
    if height == 0:
        raise cur.error("zero height", at)
    return width, height


def _rows_to_grid(rows: np.ndarray) -> OccupancyGrid:
    # rows is (height, width) in file order; flip so row 0 becomes j = H-1.
    return OccupancyGrid(np.ascontiguousarray(rows[::-1, :].T))


def _parse_p1(cur: _Cursor, width: int, height: int) -> OccupancyGrid:
    bits = np.empty(width * height, dtype=bool)
    data = cur.data
    for k in range(width * height):
        cur.skip_space()
        if cur.pos >= len(data):
            raise cur.error("unexpected end of data in bitmap")
        b = data[cur.pos]
        if b == 0x30:
            bits[k] = False
        elif b == 0x31:
            bits[k] = True
        else:
            raise cur.error(f"expected '0' or '1' in bitmap, found byte {b!r}")
        cur.pos += 1
    return _rows_to_grid(bits.reshape(height, width))


def _parse_p4(cur: _Cursor, width: int, height: int) -> OccupancyGrid:
    cur.read_raster_separator()
    row_bytes = (width + 7) // 8
    need = row_bytes * height
    if len(cur.data) - cur.pos < need:
        raise ParseError("packed bitmap truncated", len(cur.data))
    raw = np.frombuffer(cur.data, dtype=np.uint8, count=need, offset=cur.pos)
    rows = np.unpackbits(raw.reshape(height, row_bytes), axis=1)[:, :width]
    return _rows_to_grid(rows.astype(bool))


def _parse_pgm(cur: _Cursor, width: int, height: int, binary: bool,
               cutoff: int) -> OccupancyGrid:
    at = cur.pos
    maxval = cur.read_uint("maxval")
    if not 1 <= maxval <= 65535:
        raise cur.error(f"maxval {maxval} out of range 1..65535", at)
    count = width * height
    if binary:
        cur.read_raster_separator()
        if maxval < 256:
            need = count
            if len(cur.data) - cur.pos < need:
                raise ParseError("graymap truncated", len(cur.data))
            samples = np.frombuffer(cur.data, dtype=np.uint8, count=count,
                                    offset=cur.pos).astype(np.uint16)
        else:
            need = 2 * count
            if len(cur.data) - cur.pos < need:
                raise ParseError("graymap truncated", len(cur.data))
            samples = np.frombuffer(cur.data, dtype=">u2", count=count,
                                    offset=cur.pos).astype(np.uint16)
        if int(samples.max(initial=0)) > maxval:
            raise ParseError("sample exceeds maxval", cur.pos)
    else:
        samples = np.empty(count, dtype=np.uint16)
        for k in range(count):
            at = cur.pos
            v = cur.read_uint("gray sample")
            if v > maxval:
                raise cur.error(f"sample {v} exceeds maxval {maxval}", at)
            samples[k] = v
    rows = (samples.reshape(height, width) < cutoff)
    return _rows_to_grid(rows)


def parse_occupancy(data: bytes, fmt: str, *, cutoff: int = 128) -> OccupancyGrid:
    """Decode a PBM (P1/P4) or PGM (P2/P5) byte string into an OccupancyGrid.

    `fmt` is one of "pbm-ascii", "pbm-binary", "pgm-threshold".  For the PGM
    route, raw samples below `cutoff` become obstacles (dark means opaque).
    Malformed input raises ParseError carrying the byte offset of the defect.
    """
    if fmt not in _FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {_FORMATS}")
    cur = _Cursor(bytes(data))
    magic = cur.data[:2]
    declared = _MAGIC_TO_FORMAT.get(magic)
    if declared != fmt:
        raise ParseError(f"magic {magic!r} does not match format {fmt!r}", 0)
    cur.pos = 2
    width, height = _read_dimensions(cur)
    if magic == b"P1":
        return _parse_p1(cur, width, height)
    if magic == b"P4":
        return _parse_p4(cur, width, height)
    return _parse_pgm(cur, width, height, binary=(magic == b"P5"), cutoff=cutoff)


def sniff_format(data: bytes) -> str:
    """Map the Netpbm magic number to a parse_occupancy format name."""
    fmt = _MAGIC_TO_FORMAT.get(bytes(data[:2]))
    if fmt is None:
        raise ParseError(f"unrecognized magic {bytes(data[:2])!r}", 0)
    return fmt


def load_occupancy(path, *, cutoff: int = 128) -> OccupancyGrid:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_occupancy(data, sniff_format(data), cutoff=cutoff)


def generate_h_shape(canvas_w: int = 100, canvas_h: int = 100,
                     arm_w: int = 2, arm_h: int = 96,
                     bar_w: int = 70, bar_h: int = 2) -> OccupancyGrid:
    """Obstacle canvas whose open region is an H of three axis-aligned rects.

    The crossbar (bar_w x bar_h) sits centered on the canvas; the two vertical
    arms (arm_w x arm_h each) flank it flush against its left and right edges,
    vertically centered.  Dimension differences must be even so the figure is
    mirror-symmetric about both canvas axes on the cell grid.
    """
    dims = (canvas_w, canvas_h, arm_w, arm_h, bar_w, bar_h)
    if any(int(d) != d or d < 1 for d in dims):
        raise GeometryError(f"dimensions must be positive integers, got {dims}")
    if bar_w + 2 * arm_w > canvas_w:
        raise GeometryError("bar plus arms wider than canvas")
    if arm_h > canvas_h or bar_h > canvas_h:
        raise GeometryError("arm or bar taller than canvas")
    if (canvas_w - bar_w) % 2 or (canvas_h - arm_h) % 2 or (canvas_h - bar_h) % 2:
        raise GeometryError("odd clearances break two-axis mirror symmetry")

    bar_x0 = (canvas_w - bar_w) // 2
    bar_y0 = (canvas_h - bar_h) // 2
    arm_y0 = (canvas_h - arm_h) // 2
    cells = np.ones((canvas_w, canvas_h), dtype=bool)
    cells[bar_x0 - arm_w:bar_x0, arm_y0:arm_y0 + arm_h] = False
    cells[bar_x0 + bar_w:bar_x0 + bar_w + arm_w, arm_y0:arm_y0 + arm_h] = False
    cells[bar_x0:bar_x0 + bar_w, bar_y0:bar_y0 + bar_h] = False
    return OccupancyGrid(cells)


def bitmap_to_pbm(bits: np.ndarray, fmt: str = "pbm-ascii") -> bytes:
    """Serialize a (width, height) boolean array (j up) as PBM; True -> 1."""
    bits = np.asarray(bits, dtype=bool)
    if bits.ndim != 2:
        raise ValueError("bitmap must be 2-D")
    width, height = bits.shape
    rows = bits.T[::-1, :]  # back to file order, top row first
    header = f"P{'1' if fmt == 'pbm-ascii' else '4'}\n{width} {height}\n"
    if fmt == "pbm-ascii":
        body = "\n".join("".join("1" if v else "0" for v in row) for row in rows)
        return (header + body + "\n").encode("ascii")
    if fmt == "pbm-binary":
        packed = np.packbits(rows.astype(np.uint8), axis=1)
        return header.encode("ascii") + packed.tobytes()
    raise ValueError(f"unknown PBM format {fmt!r}")


def write_pbm(grid: OccupancyGrid, fmt: str = "pbm-ascii") -> bytes:
    return bitmap_to_pbm(grid.cells, fmt)


def write_field(fld: ScalarField, fmt: str) -> bytes:
    """Serialize a ScalarField as "pgm-16" or "csv".

    pgm-16 rescales defined values linearly from [0, max] to [0, 65535]
    (undefined cells to 0) and emits a binary P5 graymap.  csv emits one line
    per raster row, top row first, values with six decimals, undefined cells
    as empty entries.
    """
    values = fld.values.T[::-1, :]  # (height, width), top row first
    if fmt == "pgm-16":
        defined = ~np.isnan(values)
        top = float(values[defined].max()) if defined.any() else 0.0
        pixels = np.zeros(values.shape, dtype=np.uint16)
        if top > 0.0:
            scaled = np.where(defined, values, 0.0) / top * 65535.0
            pixels = np.rint(np.clip(scaled, 0.0, 65535.0)).astype(np.uint16)
        header = f"P5\n{fld.width} {fld.height}\n65535\n".encode("ascii")
        return header + pixels.astype(">u2").tobytes()
    if fmt == "csv":
        lines = []
        for row in values:
            cells = ["" if math.isnan(v) else f"{v:.6f}" for v in row]
            lines.append(",".join(cells))
        return ("\n".join(lines) + "\n").encode("ascii")
    raise ValueError(f"unknown field format {fmt!r}")


def read_field_csv(data: bytes | str) -> ScalarField:
    """Inverse of write_field(..., "csv"); empty entries become NaN."""
    text = data.decode("ascii") if isinstance(data, bytes) else data
    rows = []
    for line in text.splitlines():
        rows.append([math.nan if tok == "" else float(tok)
                     for tok in line.split(",")])
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged or empty CSV field")
    arr = np.array(rows, dtype=np.float64)  # (height, width), top row first
    return ScalarField(np.ascontiguousarray(arr[::-1, :].T))
