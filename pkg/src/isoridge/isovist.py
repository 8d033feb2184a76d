"""Maximum diametric length field over open cells of an occupancy grid.

For a viewpoint p and angle theta, the diametric length is the length of the
free segment through p along theta: ray_length(p, theta) plus
ray_length(p, theta + 180).  The field value at an open cell is the maximum
of that sum over the sampled sweep theta = k * angle_step, k = 0, 1, ...
while theta < 180.

Rays are resolved by exact face-to-face traversal of the unit grid, never by
stepping a fixed distance along the ray.  A ray that passes exactly through a
lattice corner is blocked there unless all three cells ahead of the corner
are open: corners shared with any obstacle are treated as solid, which keeps
visibility conservative and symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from numba import njit, prange

from .angles import half_turn_table
from .grid_io import OccupancyGrid, ScalarField

__all__ = ["FieldConfig", "IsovistField", "ray_length",
           "max_diametric_length", "compute_field", "sweep_angles"]

# Two face crossings closer than this along the ray collapse into a corner
# crossing; covers accumulated rounding at any plausible grid scale while
# staying far below real face spacing.
_CORNER_EPS = 1e-12


@dataclass(frozen=True)
class FieldConfig:
    """Sweep resolution in degrees and the ray resolution mode."""

    angle_step: float = 0.1
    ray_mode: str = "exact-traversal"

    def __post_init__(self):
        if not (0.0 < self.angle_step <= 90.0):
            raise ValueError("angle_step must be in (0, 90]")
        if self.ray_mode != "exact-traversal":
            raise ValueError(f"unknown ray_mode {self.ray_mode!r}")


@dataclass(frozen=True, eq=False)
class IsovistField(ScalarField):
    """Scalar field of maximum diametric lengths plus the sweep that made it."""

    config: FieldConfig = field(default_factory=FieldConfig)


@njit(cache=True)
def _ray(obst, w, h, ox, oy, dx, dy):
    """Distance from (ox, oy) along unit direction (dx, dy) to the first
    obstacle face, blocked lattice corner, or the outer grid boundary."""
    ix = int(math.floor(ox))
    iy = int(math.floor(oy))
    sx = 0
    sy = 0
    inv_dx = 0.0
    inv_dy = 0.0
    fx = 0
    fy = 0
    if dx > 0.0:
        sx = 1
        inv_dx = 1.0 / dx
        fx = ix + 1
    elif dx < 0.0:
        sx = -1
        inv_dx = 1.0 / dx
        fx = ix
    if dy > 0.0:
        sy = 1
        inv_dy = 1.0 / dy
        fy = iy + 1
    elif dy < 0.0:
        sy = -1
        inv_dy = 1.0 / dy
        fy = iy
    while True:
        tx = (fx - ox) * inv_dx if sx != 0 else math.inf
        ty = (fy - oy) * inv_dy if sy != 0 else math.inf
        if tx < ty - _CORNER_EPS:
            nx = ix + sx
            if nx < 0 or nx >= w or obst[nx, iy]:
                return tx
            ix = nx
            fx += sx
        elif ty < tx - _CORNER_EPS:
            ny = iy + sy
            if ny < 0 or ny >= h or obst[ix, ny]:
                return ty
            iy = ny
            fy += sy
        else:
            # Corner crossing: blocked unless the two flanking cells and the
            # diagonal cell are all open and inside the grid.
            t = tx if tx < ty else ty
            nx = ix + sx
            ny = iy + sy
            if (nx < 0 or nx >= w or ny < 0 or ny >= h
                    or obst[nx, iy] or obst[ix, ny] or obst[nx, ny]):
                return t
            ix = nx
            iy = ny
            fx += sx
            fy += sy


@njit(cache=True)
def _pair_max(obst, w, h, ox, oy, dirx, diry):
    best = 0.0
    for a in range(dirx.shape[0]):
        dx = dirx[a]
        dy = diry[a]
        total = (_ray(obst, w, h, ox, oy, dx, dy)
                 + _ray(obst, w, h, ox, oy, -dx, -dy))
        if total > best:
            best = total
    return best


@njit(cache=True, parallel=True)
def _field_kernel(obst, w, h, ii, jj, dirx, diry, out):
    # Each open cell writes its own slot, so results are independent of the
    # thread schedule.
    for p in prange(ii.shape[0]):
        ox = ii[p] + 0.5
        oy = jj[p] + 0.5
        out[p] = _pair_max(obst, w, h, ox, oy, dirx, diry)


def _direction_table(angle_step: float) -> tuple[np.ndarray, np.ndarray]:
    """Unit direction vectors (cos, sin) for the half-turn sweep [0, 180)."""
    _, cos_tab, sin_tab = half_turn_table(angle_step)
    return cos_tab, sin_tab


def sweep_angles(config: FieldConfig = FieldConfig()) -> np.ndarray:
    """The sampled sweep angles in degrees, k * angle_step while < 180."""
    angles, _, _ = half_turn_table(config.angle_step)
    return angles


def _direction(theta_deg: float) -> tuple[float, float]:
    theta = theta_deg % 360.0
    q = int(theta // 90.0) % 4
    phi = theta - 90.0 * q
    c = float(np.cos(np.radians(phi)))
    s = float(np.sin(np.radians(phi)))
    if q == 0:
        return c, s
    if q == 1:
        return -s, c
    if q == 2:
        return -c, -s
    return s, -c


def _check_origin(grid: OccupancyGrid, origin: tuple[float, float]) -> tuple[float, float]:
    ox, oy = float(origin[0]), float(origin[1])
    if not (0.0 < ox < grid.width and 0.0 < oy < grid.height):
        raise ValueError(f"origin {origin} outside the grid")
    if ox == math.floor(ox) or oy == math.floor(oy):
        raise ValueError(f"origin {origin} lies on a cell boundary")
    if grid.cells[int(ox), int(oy)]:
        raise ValueError(f"origin {origin} inside an obstacle cell")
    return ox, oy


def ray_length(grid: OccupancyGrid, origin: tuple[float, float],
               theta_deg: float) -> float:
    """Free distance from `origin` along `theta_deg` (degrees, CCW from +x).

    The origin must lie strictly inside an open cell.  The ray ends on the
    first obstacle-cell face, on a blocked lattice corner, or on the outer
    boundary of the grid, whichever comes first.
    """
    ox, oy = _check_origin(grid, origin)
    dx, dy = _direction(theta_deg)
    return float(_ray(grid.cells, grid.width, grid.height, ox, oy, dx, dy))


def max_diametric_length(grid: OccupancyGrid, cell: tuple[int, int],
                         config: FieldConfig = FieldConfig()) -> float:
    """Sampled maximum diametric length at the center of an open cell."""
    i, j = int(cell[0]), int(cell[1])
    if not (0 <= i < grid.width and 0 <= j < grid.height):
        raise ValueError(f"cell {cell} outside the grid")
    if grid.cells[i, j]:
        raise ValueError(f"cell {cell} is an obstacle")
    dirx, diry = _direction_table(config.angle_step)
    return float(_pair_max(grid.cells, grid.width, grid.height,
                           i + 0.5, j + 0.5, dirx, diry))


def compute_field(grid: OccupancyGrid, config: FieldConfig = FieldConfig(),
                  workers: int | None = None) -> IsovistField:
    """Evaluate max_diametric_length at every open cell center.

    Open cells are mapped in parallel; each writes only its own output slot,
    so the result is bit-identical for any worker count.  `workers` caps the
    thread count for this call (clamped to the threads numba launched with);
    None keeps the current setting.
    """
    ii, jj = np.nonzero(~grid.cells)
    values = np.full((grid.width, grid.height), np.nan, dtype=np.float64)
    if ii.size:
        dirx, diry = _direction_table(config.angle_step)
        out = np.empty(ii.size, dtype=np.float64)
        ii = np.ascontiguousarray(ii, dtype=np.int64)
        jj = np.ascontiguousarray(jj, dtype=np.int64)
        if workers is None:
            _field_kernel(grid.cells, grid.width, grid.height,
                          ii, jj, dirx, diry, out)
        else:
            if workers < 1:
                raise ValueError("workers must be >= 1")
            previous = numba.get_num_threads()
            numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
            try:
                _field_kernel(grid.cells, grid.width, grid.height,
                              ii, jj, dirx, diry, out)
            finally:
                numba.set_num_threads(previous)
        values[ii, jj] = out
    return IsovistField(values=values, config=config)
