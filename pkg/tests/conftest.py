import os

# Pick the threading layer before numba loads; the default probe warns when
# it finds an old TBB.  Respect an explicit user choice.
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

import numpy as np
import pytest

import isoridge as ir

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def empty11():
    return ir.OccupancyGrid(np.zeros((11, 11), dtype=bool))


def random_grid(rng, w, h, density=0.3):
    """Random occupancy grid guaranteed to keep at least one open cell."""
    cells = rng.random((w, h)) < density
    if cells.all():
        cells[rng.integers(w), rng.integers(h)] = False
    return ir.OccupancyGrid(cells)


def random_open_cell(rng, grid):
    open_ij = np.argwhere(~grid.cells)
    return tuple(open_ij[rng.integers(len(open_ij))])
