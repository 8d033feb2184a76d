"""Normal-parameterization Hough transform over planar point sets.

Each point (x, y) contributes, for every sampled orientation theta, one vote
to the rho bin nearest rho = (x - ox) cos(theta) + (y - oy) sin(theta), so
collinear points pile votes into a common (rho, theta) bin.  Peaks are
extracted in vote order under a rectangular suppression window, and each
peak inverts to the segment its infinite line cuts from the image rectangle.

theta bins sample [0, 180) at k * theta_step; rho bins are centered at
m * rho_bin for m in [-M, M], where M covers the largest distance from the
configured origin to a corner of the bounds rectangle.  rho values round to
the nearest bin, halves away from zero, which keeps the binning symmetric
under point reflection about the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

import numpy as np

from .angles import half_turn_table
from .grid_io import ScalarField, write_field

__all__ = ["HoughConfig", "HoughAccumulator", "LineParams", "LineOutsideBounds",
           "point_to_sinusoid", "hough_transform", "rank_peaks", "invert_line",
           "accumulator_to_pgm"]


class LineOutsideBounds(ValueError):
    """The inverted line does not intersect the image rectangle."""


@dataclass(frozen=True)
class HoughConfig:
    """Bin geometry for the accumulator.

    suppression_window is (rho bins, theta bins): after a peak is taken,
    every bin within that half-width rectangle around it is zeroed.  bounds
    is the image rectangle [0, W] x [0, H] that sizes the rho axis and clips
    inverted lines.
    """

    origin: tuple[float, float]
    bounds: tuple[float, float]
    theta_step: float = 1.0
    rho_bin: float = 1.0
    suppression_window: tuple[int, int] = (2, 2)

    def __post_init__(self):
        ox, oy = map(float, self.origin)
        w, h = map(float, self.bounds)
        if not (math.isfinite(ox) and math.isfinite(oy)):
            raise ValueError("origin must be finite")
        if not (w > 0.0 and h > 0.0 and math.isfinite(w) and math.isfinite(h)):
            raise ValueError("bounds must be positive and finite")
        if not (0.0 < float(self.theta_step) < 180.0):
            raise ValueError("theta_step must be in (0, 180)")
        if not float(self.rho_bin) > 0.0:
            raise ValueError("rho_bin must be positive")
        dr, dt = self.suppression_window
        if int(dr) != dr or int(dt) != dt or dr < 0 or dt < 0:
            raise ValueError("suppression_window must be nonnegative integers")
        object.__setattr__(self, "origin", (ox, oy))
        object.__setattr__(self, "bounds", (w, h))
        object.__setattr__(self, "theta_step", float(self.theta_step))
        object.__setattr__(self, "rho_bin", float(self.rho_bin))
        object.__setattr__(self, "suppression_window", (int(dr), int(dt)))

    @property
    def rho_max(self) -> float:
        """Largest distance from the origin to a corner of the bounds."""
        ox, oy = self.origin
        w, h = self.bounds
        return max(math.hypot(cx - ox, cy - oy)
                   for cx in (0.0, w) for cy in (0.0, h))

    @property
    def rho_half_bins(self) -> int:
        """M such that bins m in [-M, M] cover every in-bounds rho."""
        return int(math.floor(self.rho_max / self.rho_bin + 0.5))

    def theta_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return half_turn_table(self.theta_step)


@dataclass(frozen=True, eq=False)
class HoughAccumulator:
    """votes[r, k] counts hits in rho bin m = r - M, theta bin k."""

    votes: np.ndarray
    config: HoughConfig
    total_points: int

    @property
    def rho_half_bins(self) -> int:
        return (self.votes.shape[0] - 1) // 2

    @property
    def rho_centers(self) -> np.ndarray:
        m = self.rho_half_bins
        return np.arange(-m, m + 1, dtype=np.float64) * self.config.rho_bin

    @property
    def theta_centers(self) -> np.ndarray:
        return self.config.theta_table()[0]


@dataclass(frozen=True)
class LineParams:
    """One ranked accumulator peak in normal form rho, theta (degrees)."""

    rho: float
    theta: float
    votes: int
    rank: int

    def __post_init__(self):
        if not 0.0 <= self.theta < 180.0:
            raise ValueError("theta must lie in [0, 180)")
        if self.votes <= 0:
            raise ValueError("votes must be positive")
        if self.rank < 1:
            raise ValueError("rank is 1-based")


def point_to_sinusoid(point, config: HoughConfig) -> list[tuple[int, float]]:
    """(theta bin, rho) samples of the point's sinusoid at all bin centers."""
    ox, oy = config.origin
    x = float(point[0]) - ox
    y = float(point[1]) - oy
    _, cos_tab, sin_tab = config.theta_table()
    return [(k, float(x * cos_tab[k] + y * sin_tab[k]))
            for k in range(cos_tab.shape[0])]


def _round_half_away(scaled: np.ndarray) -> np.ndarray:
    return np.trunc(scaled + np.copysign(0.5, scaled))


def hough_transform(points, config: HoughConfig) -> HoughAccumulator:
    """Accumulate the sinusoids of all points; one vote per point per column.

    `points` is an (n, 2) array of continuous image coordinates inside the
    configured bounds.  Every theta column of the result sums to n.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    n = pts.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    ox, oy = config.origin
    _, cos_tab, sin_tab = config.theta_table()
    x = pts[:, 0] - ox
    y = pts[:, 1] - oy
    rho = x[:, None] * cos_tab[None, :] + y[:, None] * sin_tab[None, :]
    scaled = rho / config.rho_bin
    m_bins = config.rho_half_bins
    overflow = np.max(np.abs(scaled), axis=1) > m_bins + 0.5 + 1e-9
    if np.any(overflow):
        bad = int(np.argmax(overflow))
        raise ValueError(f"point {tuple(pts[bad])} lies outside the bounds")
    rows = np.clip(_round_half_away(scaled).astype(np.int64) + m_bins,
                   0, 2 * m_bins)
    k_bins = cos_tab.shape[0]
    votes = np.empty((2 * m_bins + 1, k_bins), dtype=np.int64)
    for k in range(k_bins):
        votes[:, k] = np.bincount(rows[:, k], minlength=2 * m_bins + 1)
    return HoughAccumulator(votes=votes, config=config, total_points=n)


def _peak_stream(acc: HoughAccumulator) -> Iterator[LineParams]:
    """Yield peaks best-first, suppressing a window around each.

    Ties break toward the smaller theta bin, then the smaller rho bin; the
    stream ends when the accumulator copy is exhausted (all zeros).
    """
    work = np.ascontiguousarray(acc.votes.T).copy()  # (theta, rho) scan order
    n_rho = work.shape[1]
    m_bins = acc.rho_half_bins
    rho_bin = acc.config.rho_bin
    thetas = acc.theta_centers
    d_rho, d_theta = acc.config.suppression_window
    rank = 0
    while True:
        flat = int(work.argmax())
        tk, r = divmod(flat, n_rho)
        votes = int(work[tk, r])
        if votes == 0:
            return
        rank += 1
        yield LineParams(rho=(r - m_bins) * rho_bin, theta=float(thetas[tk]),
                         votes=votes, rank=rank)
        work[max(0, tk - d_theta):tk + d_theta + 1,
             max(0, r - d_rho):r + d_rho + 1] = 0


def rank_peaks(acc: HoughAccumulator, k: int) -> list[LineParams]:
    """The k best peaks in extraction order; fewer if votes run out."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(islice(_peak_stream(acc), k))


def _bin_trig(theta: float, config: HoughConfig) -> tuple[float, float]:
    # Prefer the shared table entry so inverted axis-aligned lines are exact
    # and consistent with the trigonometry that cast the votes.
    angles, cos_tab, sin_tab = config.theta_table()
    k = int(round(theta / config.theta_step))
    if 0 <= k < angles.shape[0] and abs(angles[k] - theta) <= 1e-9:
        return float(cos_tab[k]), float(sin_tab[k])
    rad = math.radians(theta)
    return math.cos(rad), math.sin(rad)


def invert_line(params: LineParams, config: HoughConfig,
                bounds: tuple[float, float]) -> tuple[tuple[float, float],
                                                      tuple[float, float]]:
    """Clip the line (p - origin) . (cos t, sin t) = rho to [0,W] x [0,H].

    Returns the two endpoints in lexicographic order.  Raises
    LineOutsideBounds when the line misses the rectangle entirely.
    """
    w, h = float(bounds[0]), float(bounds[1])
    ox, oy = config.origin
    c, s = _bin_trig(params.theta, config)
    bx = ox + params.rho * c
    by = oy + params.rho * s
    dx, dy = -s, c
    t0, t1 = -math.inf, math.inf
    for base, delta, lo, hi in ((bx, dx, 0.0, w), (by, dy, 0.0, h)):
        if delta != 0.0:
            ta = (lo - base) / delta
            tb = (hi - base) / delta
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
        elif not lo <= base <= hi:
            raise LineOutsideBounds(f"rho={params.rho}, theta={params.theta} "
                                    f"misses the {w} x {h} rectangle")
    if t0 > t1:
        raise LineOutsideBounds(f"rho={params.rho}, theta={params.theta} "
                                f"misses the {w} x {h} rectangle")
    ends = []
    for t in (t0, t1):
        px = float(min(max(bx + t * dx, 0.0), w))
        py = float(min(max(by + t * dy, 0.0), h))
        ends.append((px, py))
    ends.sort()
    return ends[0], ends[1]


def accumulator_to_pgm(acc: HoughAccumulator) -> bytes:
    """16-bit PGM of the votes, theta along x, +rho at the top row."""
    return write_field(ScalarField(acc.votes.T.astype(np.float64)), "pgm-16")
