"""Trigonometric tables for half-turn angle sweeps theta = k * step < 180.

When step divides 90 the table is assembled from one folded quadrant whose
upper half is copied from the lower half (cos(r*step) and sin((m-r)*step)
are the same number, so the copy is exact), and the second quadrant is the
quarter-turn image of the first.  Under any of the eight square symmetries a
table entry then maps to another entry by sign flips and coordinate swaps
alone, with no floating-point drift.  Steps that do not divide 90 fall back
to plain evaluation and carry no exactness guarantee.
"""

from __future__ import annotations

import numpy as np

__all__ = ["half_turn_table"]

_CACHE: dict[float, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def half_turn_table(step: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (angles_deg, cos, sin) for the sweep k * step while < 180."""
    step = float(step)
    cached = _CACHE.get(step)
    if cached is not None:
        return cached
    if not (0.0 < step < 180.0):
        raise ValueError("step must be in (0, 180)")
    per_quadrant = 90.0 / step
    m = int(round(per_quadrant))
    if m >= 1 and abs(per_quadrant - m) <= 1e-9 * m:
        offs = np.arange(m, dtype=np.float64) * step
        c = np.cos(np.radians(offs))
        s = np.sin(np.radians(offs))
        for r in range(m // 2 + 1, m):
            c[r] = s[m - r]
            s[r] = c[m - r]
        if m % 2 == 0 and m >= 2:
            s[m // 2] = c[m // 2]
        angles = np.arange(2 * m, dtype=np.float64) * step
        cos_tab = np.concatenate([c, -s])
        sin_tab = np.concatenate([s, c])
    else:
        ks = np.arange(int(np.ceil(180.0 / step)) + 1, dtype=np.float64)
        angles = ks * step
        angles = angles[angles < 180.0]
        cos_tab = np.cos(np.radians(angles))
        sin_tab = np.sin(np.radians(angles))
    for arr in (angles, cos_tab, sin_tab):
        arr.flags.writeable = False
    table = (angles, cos_tab, sin_tab)
    _CACHE[step] = table
    return table
