"""Ridge extraction: local maxima of a scalar field over open cells.

A cell is marked when its value is defined and no defined 8-neighbor has a
strictly larger value.  Ties are kept, so a flat run of equal values is
marked end to end; undefined cells (obstacles) and the outside of the grid
never suppress a candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid_io import ScalarField

__all__ = ["RidgeMask", "local_maxima", "mask_points"]


@dataclass(frozen=True)
class RidgeMask:
    """Boolean (width, height) array, True on ridge cells."""

    marked: np.ndarray

    def __post_init__(self):
        marked = np.ascontiguousarray(self.marked, dtype=bool)
        if marked.ndim != 2:
            raise ValueError("ridge mask must be 2-D")
        object.__setattr__(self, "marked", marked)

    @property
    def width(self) -> int:
        return self.marked.shape[0]

    @property
    def height(self) -> int:
        return self.marked.shape[1]

    @property
    def count(self) -> int:
        return int(self.marked.sum())


def local_maxima(fld: ScalarField) -> RidgeMask:
    """Mark every defined cell whose value is >= all defined 8-neighbors."""
    values = fld.values
    defined = fld.defined_mask()
    w, h = values.shape
    # Undefined and out-of-grid neighbors compare as -inf so they never win.
    padded = np.full((w + 2, h + 2), -np.inf, dtype=np.float64)
    inner = padded[1:-1, 1:-1]
    inner[defined] = values[defined]
    neighbor_best = np.full((w, h), -np.inf, dtype=np.float64)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = padded[1 + di:w + 1 + di, 1 + dj:h + 1 + dj]
            np.maximum(neighbor_best, shifted, out=neighbor_best)
    marked = defined & (inner >= neighbor_best)
    return RidgeMask(marked=marked)


def mask_points(mask: RidgeMask) -> np.ndarray:
    """Centers of marked cells as an (n, 2) float array.

    Rows are ordered by x then y, so downstream voting is deterministic.
    """
    ii, jj = np.nonzero(mask.marked)
    pts = np.empty((ii.size, 2), dtype=np.float64)
    pts[:, 0] = ii + 0.5
    pts[:, 1] = jj + 0.5
    return pts
