"""Brute-force reference implementations used to validate the fast kernels.

Rays are resolved against the explicit edge set of the scene: the four axis
aligned edges of every obstacle cell plus the four outer boundary edges.
The first hit is the smallest positive intersection parameter over closed
segments, so a ray that grazes a lattice corner shared with any obstacle is
stopped there, matching the production corner rule by construction rather
than by shared code.  Segment membership and parameter positivity are judged
with an explicit 1e-12 epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .grid_io import OccupancyGrid

__all__ = ["OracleConfig", "oracle_ray_length", "oracle_delta_max"]

_EPS = 1e-12
_DEG = math.pi / 180.0


@dataclass(frozen=True)
class OracleConfig:
    """Dense sweep resolution; must be finer than any kernel step it checks."""

    dense_angle_step: float = 0.001
    geometry_mode: str = "segment-intersection"

    def __post_init__(self):
        if not (0.0 < self.dense_angle_step <= 0.001):
            raise ValueError("dense_angle_step must be in (0, 0.001]")
        if self.geometry_mode != "segment-intersection":
            raise ValueError(f"unknown geometry_mode {self.geometry_mode!r}")


def _scene_edges(grid: OccupancyGrid):
    """Vertical edges as (x, y0, y1) and horizontal edges as (y, x0, x1)."""
    ii, jj = np.nonzero(grid.cells)
    fi = ii.astype(np.float64)
    fj = jj.astype(np.float64)
    w = float(grid.width)
    h = float(grid.height)
    vx = np.concatenate([fi, fi + 1.0, [0.0, w]])
    vy0 = np.concatenate([fj, fj, [0.0, 0.0]])
    vy1 = np.concatenate([fj + 1.0, fj + 1.0, [h, h]])
    hy = np.concatenate([fj, fj + 1.0, [0.0, h]])
    hx0 = np.concatenate([fi, fi, [0.0, 0.0]])
    hx1 = np.concatenate([fi + 1.0, fi + 1.0, [w, w]])
    return vx, vy0, vy1, hy, hx0, hx1


@njit(cache=True)
def _first_hit(vx, vy0, vy1, hy, hx0, hx1, ox, oy, dx, dy):
    best = math.inf
    if dx != 0.0:
        inv = 1.0 / dx
        for e in range(vx.shape[0]):
            t = (vx[e] - ox) * inv
            if t > _EPS and t < best:
                yhit = oy + t * dy
                if vy0[e] - _EPS <= yhit <= vy1[e] + _EPS:
                    best = t
    if dy != 0.0:
        inv = 1.0 / dy
        for e in range(hy.shape[0]):
            t = (hy[e] - oy) * inv
            if t > _EPS and t < best:
                xhit = ox + t * dx
                if hx0[e] - _EPS <= xhit <= hx1[e] + _EPS:
                    best = t
    return best


@njit(cache=True, parallel=True)
def _dense_sweep(vx, vy0, vy1, hy, hx0, hx1, ox, oy, step, n):
    sums = np.empty(n, dtype=np.float64)
    for a in prange(n):
        rad = (a * step) * _DEG
        dx = math.cos(rad)
        dy = math.sin(rad)
        fwd = _first_hit(vx, vy0, vy1, hy, hx0, hx1, ox, oy, dx, dy)
        bwd = _first_hit(vx, vy0, vy1, hy, hx0, hx1, ox, oy, -dx, -dy)
        sums[a] = fwd + bwd
    return sums


def _check_origin(grid: OccupancyGrid, origin) -> tuple[float, float]:
    ox, oy = float(origin[0]), float(origin[1])
    if not (0.0 < ox < grid.width and 0.0 < oy < grid.height):
        raise ValueError(f"origin {origin} outside the grid")
    if ox == math.floor(ox) or oy == math.floor(oy):
        raise ValueError(f"origin {origin} lies on a cell boundary")
    if grid.cells[int(ox), int(oy)]:
        raise ValueError(f"origin {origin} inside an obstacle cell")
    return ox, oy


def oracle_ray_length(grid: OccupancyGrid, origin, theta_deg: float) -> float:
    """First-hit distance by exhaustive edge intersection (no traversal)."""
    ox, oy = _check_origin(grid, origin)
    rad = math.radians(theta_deg % 360.0)
    dx = math.cos(rad)
    dy = math.sin(rad)
    edges = _scene_edges(grid)
    hit = float(_first_hit(*edges, ox, oy, dx, dy))
    if not math.isfinite(hit):
        raise AssertionError("ray escaped the boundary edges")
    return hit


def _sweep_count(step: float) -> int:
    n = max(1, int(math.ceil(180.0 / step)))
    while (n - 1) * step >= 180.0:
        n -= 1
    while n * step < 180.0:
        n += 1
    return n


def oracle_delta_max(grid: OccupancyGrid, cell: tuple[int, int],
                     config: OracleConfig = OracleConfig()) -> float:
    """Dense-sweep maximum diametric length at an open cell's center."""
    i, j = int(cell[0]), int(cell[1])
    if not (0 <= i < grid.width and 0 <= j < grid.height):
        raise ValueError(f"cell {cell} outside the grid")
    if grid.cells[i, j]:
        raise ValueError(f"cell {cell} is an obstacle")
    edges = _scene_edges(grid)
    n = _sweep_count(config.dense_angle_step)
    sums = _dense_sweep(*edges, i + 0.5, j + 0.5, config.dense_angle_step, n)
    return float(np.max(sums))
