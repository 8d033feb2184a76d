"""End-to-end extraction: field, ridge mask, votes, ranked clipped lines.

The stages compose pure functions from the other modules and stay
sequential; only the field kernel parallelizes internally.  Detected lines
are clipped to the image rectangle, not to open space: a ranked line may
legitimately cross obstacles.  clip_to_open trims each line to its longest
run through open cells instead, as a clearly non-default extension.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from numba import njit

from .grid_io import OccupancyGrid, bitmap_to_pbm, write_field
from .hough import (HoughAccumulator, HoughConfig, LineOutsideBounds,
                    LineParams, _peak_stream, accumulator_to_pgm,
                    hough_transform, invert_line)
from .isovist import FieldConfig, IsovistField, _ray, compute_field
from .ridges import RidgeMask, local_maxima, mask_points

__all__ = ["AxialLine", "PipelineConfig", "PipelineResult",
           "extract_axial_lines", "run_pipeline", "apply_length_threshold",
           "estimate_narrowest_street", "emit", "EMIT_FORMATS",
           "lines_to_csv", "lines_to_geojson", "lines_to_svg"]

log = logging.getLogger("isoridge.pipeline")

EMIT_FORMATS = ("csv", "geojson", "svg", "field-pgm", "mask-pbm",
                "accumulator-pgm")

_EMIT_FILES = {"csv": "lines.csv", "geojson": "lines.geojson",
               "svg": "overlay.svg", "field-pgm": "field.pgm",
               "mask-pbm": "mask.pbm", "accumulator-pgm": "accumulator.pgm"}


@dataclass(frozen=True)
class AxialLine:
    """A ranked line with the segment it cuts from the image rectangle."""

    params: LineParams
    segment: tuple[tuple[float, float], tuple[float, float]]
    length: float


@dataclass(frozen=True)
class PipelineConfig:
    """Flat run parameters; every CLI flag maps to one field."""

    angle_step: float = 0.1
    ray_mode: str = "exact-traversal"
    theta_step: float = 1.0
    rho_bin: float = 1.0
    suppression_window: tuple[int, int] = (2, 2)
    origin: tuple[float, float] | None = None  # None = image center
    num_lines: int = 6
    min_length: float = 0.0
    emit: frozenset[str] = frozenset()
    clip_to_open: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.num_lines < 1:
            raise ValueError("num_lines must be >= 1")
        if self.min_length < 0.0:
            raise ValueError("min_length must be >= 0")
        unknown = set(self.emit) - set(EMIT_FORMATS)
        if unknown:
            raise ValueError(f"unknown emit formats {sorted(unknown)}")
        object.__setattr__(self, "emit", frozenset(self.emit))

    def field_config(self) -> FieldConfig:
        return FieldConfig(angle_step=self.angle_step, ray_mode=self.ray_mode)

    def hough_config(self, grid: OccupancyGrid) -> HoughConfig:
        origin = self.origin
        if origin is None:
            origin = (grid.width / 2.0, grid.height / 2.0)
        return HoughConfig(origin=origin,
                           bounds=(float(grid.width), float(grid.height)),
                           theta_step=self.theta_step, rho_bin=self.rho_bin,
                           suppression_window=self.suppression_window)


@dataclass(frozen=True)
class PipelineResult:
    field: IsovistField
    mask: RidgeMask
    accumulator: HoughAccumulator
    lines: list[AxialLine]
    skipped: list[LineParams]


def apply_length_threshold(lines: list[AxialLine],
                           min_length: float) -> list[AxialLine]:
    """Drop lines shorter than min_length, preserving rank order."""
    return [ln for ln in lines if ln.length >= min_length]


@njit(cache=True)
def _min_axial_clearance(obst, w, h):
    best = math.inf
    for i in range(w):
        for j in range(h):
            if not obst[i, j]:
                ox = i + 0.5
                oy = j + 0.5
                d = _ray(obst, w, h, ox, oy, 1.0, 0.0)
                d = min(d, _ray(obst, w, h, ox, oy, -1.0, 0.0))
                d = min(d, _ray(obst, w, h, ox, oy, 0.0, 1.0))
                d = min(d, _ray(obst, w, h, ox, oy, 0.0, -1.0))
                best = min(best, d)
    return best


def estimate_narrowest_street(grid: OccupancyGrid) -> float:
    """Twice the smallest axis-aligned clearance of any open cell center.

    Suggested as a minimum line length: anything shorter than the narrowest
    passage is noise rather than an axis of movement.
    """
    if grid.open_count() == 0:
        raise ValueError("grid has no open cells")
    return 2.0 * float(_min_axial_clearance(grid.cells, grid.width,
                                            grid.height))


def _cell_open_at(grid: OccupancyGrid, x: float, y: float) -> bool:
    # A sample on a cell boundary counts as open when any adjacent cell is:
    # sight along a wall face is unobstructed if one side is open.
    xs = (int(x) - 1, int(x)) if x == math.floor(x) else (int(math.floor(x)),)
    ys = (int(y) - 1, int(y)) if y == math.floor(y) else (int(math.floor(y)),)
    return any(not grid.is_obstacle(i, j) for i in xs for j in ys)


def _clip_segment_to_open(grid: OccupancyGrid, segment):
    """Longest sub-segment whose crossed cells are all open, or None."""
    (x0, y0), (x1, y1) = segment
    ts = [0.0, 1.0]
    for a0, a1 in ((x0, x1), (y0, y1)):
        lo, hi = min(a0, a1), max(a0, a1)
        if hi > lo:
            for k in range(int(math.ceil(lo)), int(math.floor(hi)) + 1):
                ts.append((k - a0) / (a1 - a0))
    ts = sorted({t for t in ts if 0.0 <= t <= 1.0})
    best = None
    run_start = None
    for ta, tb in zip(ts[:-1], ts[1:]):
        tm = 0.5 * (ta + tb)
        open_here = _cell_open_at(grid, x0 + tm * (x1 - x0),
                                  y0 + tm * (y1 - y0))
        if open_here and run_start is None:
            run_start = ta
        if (not open_here or tb == ts[-1]) and run_start is not None:
            run_end = ta if not open_here else tb
            if best is None or run_end - run_start > best[1] - best[0]:
                best = (run_start, run_end)
            run_start = None
    if best is None or best[1] <= best[0]:
        return None
    pa = (x0 + best[0] * (x1 - x0), y0 + best[0] * (y1 - y0))
    pb = (x0 + best[1] * (x1 - x0), y0 + best[1] * (y1 - y0))
    return (min(pa, pb), max(pa, pb))


def _segment_length(segment) -> float:
    (x0, y0), (x1, y1) = segment
    return math.hypot(x1 - x0, y1 - y0)


def run_pipeline(grid: OccupancyGrid, config: PipelineConfig) -> PipelineResult:
    """Field -> ridge mask -> votes -> ranked lines, with skip accounting.

    Peaks whose inverted line misses the image rectangle (or, under
    clip_to_open, crosses no open cell) are logged and skipped without
    consuming a rank; extraction continues until num_lines survive or the
    accumulator is exhausted.  The length threshold then filters the ranked
    list without renumbering.
    """
    if grid.open_count() == 0:
        raise ValueError("grid has no open cells")
    field = compute_field(grid, config.field_config(), workers=config.workers)
    mask = local_maxima(field)
    points = mask_points(mask)
    if points.shape[0] == 0:
        raise ValueError("no ridge points")
    hough_cfg = config.hough_config(grid)
    acc = hough_transform(points, hough_cfg)
    bounds = hough_cfg.bounds
    lines: list[AxialLine] = []
    skipped: list[LineParams] = []
    for params in _peak_stream(acc):
        if len(lines) >= config.num_lines:
            break
        try:
            segment = invert_line(params, hough_cfg, bounds)
        except LineOutsideBounds as miss:
            log.warning("skipping peak rank %d: %s", params.rank, miss)
            skipped.append(params)
            continue
        if config.clip_to_open:
            segment = _clip_segment_to_open(grid, segment)
            if segment is None:
                log.warning("skipping peak rank %d: no open-space run",
                            params.rank)
                skipped.append(params)
                continue
        ranked = replace(params, rank=len(lines) + 1)
        lines.append(AxialLine(params=ranked, segment=segment,
                               length=_segment_length(segment)))
    lines = apply_length_threshold(lines, config.min_length)
    return PipelineResult(field=field, mask=mask, accumulator=acc,
                          lines=lines, skipped=skipped)


def extract_axial_lines(grid: OccupancyGrid,
                        config: PipelineConfig = PipelineConfig()
                        ) -> list[AxialLine]:
    return run_pipeline(grid, config).lines


def lines_to_csv(lines: list[AxialLine]) -> bytes:
    rows = ["rank,rho,theta_deg,votes,x1,y1,x2,y2,length"]
    for ln in lines:
        (x1, y1), (x2, y2) = ln.segment
        p = ln.params
        rows.append(f"{p.rank},{p.rho:.3f},{p.theta},{p.votes},"
                    f"{x1},{y1},{x2},{y2},{ln.length:.3f}")
    return ("\n".join(rows) + "\n").encode("ascii")


def lines_to_geojson(lines: list[AxialLine]) -> bytes:
    features = []
    for ln in lines:
        (x1, y1), (x2, y2) = ln.segment
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString",
                         "coordinates": [[x1, y1], [x2, y2]]},
            "properties": {"rank": ln.params.rank, "votes": ln.params.votes,
                           "rho": ln.params.rho, "theta_deg": ln.params.theta,
                           "length": ln.length},
        })
    doc = {"type": "FeatureCollection", "features": features}
    return (json.dumps(doc, separators=(",", ":")) + "\n").encode("ascii")


def _svg_obstacle_rects(grid: OccupancyGrid) -> list[str]:
    rects = []
    h = grid.height
    rows = grid.cells.T[::-1, :]  # top row first
    for file_row in range(h):
        row = rows[file_row]
        i = 0
        while i < row.shape[0]:
            if row[i]:
                start = i
                while i < row.shape[0] and row[i]:
                    i += 1
                rects.append(f'<rect x="{start}" y="{file_row}" '
                             f'width="{i - start}" height="1"/>')
            else:
                i += 1
    return rects


def lines_to_svg(grid: OccupancyGrid, lines: list[AxialLine]) -> bytes:
    w, h = grid.width, grid.height
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="0 0 {w} {h}" width="{8 * w}" height="{8 * h}">',
             f'<rect width="{w}" height="{h}" fill="#f5f1e6"/>',
             '<g fill="#3a3a3a">']
    parts.extend(_svg_obstacle_rects(grid))
    parts.append('</g>')
    parts.append('<g stroke="#c0392b" stroke-width="0.4" fill="none">')
    for ln in lines:
        (x1, y1), (x2, y2) = ln.segment
        # SVG y runs downward; grid y runs upward.
        parts.append(f'<line x1="{x1}" y1="{h - y1}" '
                     f'x2="{x2}" y2="{h - y2}"/>')
    parts.append('</g>')
    parts.append('<g font-family="sans-serif" font-size="3" fill="#c0392b">')
    for ln in lines:
        (x1, y1), (x2, y2) = ln.segment
        f = 0.5 + 0.35 * ((ln.params.rank % 5) - 2) / 5.0
        lx = x1 + f * (x2 - x1)
        ly = y1 + f * (y2 - y1)
        parts.append(f'<text x="{lx + 0.8}" y="{h - ly - 0.8}">'
                     f'l{ln.params.rank}</text>')
    parts.append('</g>')
    parts.append('</svg>')
    return ("\n".join(parts) + "\n").encode("ascii")


def emit(result: PipelineResult, grid: OccupancyGrid, config: PipelineConfig,
         out_dir) -> dict[str, Path]:
    """Write the selected artifact files into out_dir; returns name -> path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    payloads = {
        "csv": lambda: lines_to_csv(result.lines),
        "geojson": lambda: lines_to_geojson(result.lines),
        "svg": lambda: lines_to_svg(grid, result.lines),
        "field-pgm": lambda: write_field(result.field, "pgm-16"),
        "mask-pbm": lambda: bitmap_to_pbm(result.mask.marked, "pbm-binary"),
        "accumulator-pgm": lambda: accumulator_to_pgm(result.accumulator),
    }
    for name in EMIT_FORMATS:
        if name in config.emit:
            path = out / _EMIT_FILES[name]
            path.write_bytes(payloads[name]())
            written[name] = path
    return written
