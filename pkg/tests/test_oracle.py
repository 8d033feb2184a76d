"""Edge-intersection reference oracle vs the traversal kernel."""

import math

import numpy as np
import pytest

import isoridge as ir
from conftest import random_grid, random_open_cell

# dense-sweep value for the middle cell of a fully open 9x1 corridor,
# frozen from a 0.001 degree run of the edge-intersection oracle
CORRIDOR_DMAX = 9.055381770997283


def test_empty_center_axis(empty11):
    assert ir.oracle_ray_length(empty11, (5.5, 5.5), 0.0) == pytest.approx(5.5, abs=1e-12)


def test_matches_kernel_on_examples(empty11):
    for theta in (0.0, 45.0, 90.0, 133.7, 271.25):
        a = ir.oracle_ray_length(empty11, (5.5, 5.5), theta)
        b = ir.ray_length(empty11, (5.5, 5.5), theta)
        assert abs(a - b) <= 1e-9


def test_blocked_corner_flanked():
    cells = np.zeros((2, 2), dtype=bool)
    cells[1, 0] = True
    cells[0, 1] = True
    grid = ir.OccupancyGrid(cells)
    a = ir.oracle_ray_length(grid, (0.5, 0.5), 45.0)
    assert a == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert abs(a - ir.ray_length(grid, (0.5, 0.5), 45.0)) <= 1e-9


def test_blocked_corner_diagonal_only():
    cells = np.zeros((3, 3), dtype=bool)
    cells[1, 1] = True
    grid = ir.OccupancyGrid(cells)
    a = ir.oracle_ray_length(grid, (0.5, 0.5), 45.0)
    assert a == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert abs(a - ir.ray_length(grid, (0.5, 0.5), 45.0)) <= 1e-9


def test_random_agreement_with_kernel(rng):
    worst = 0.0
    for _ in range(200):
        grid = random_grid(rng, int(rng.integers(2, 13)), int(rng.integers(2, 13)), 0.3)
        i, j = random_open_cell(rng, grid)
        origin = (i + float(rng.uniform(0.05, 0.95)), j + float(rng.uniform(0.05, 0.95)))
        theta = float(rng.uniform(0.0, 360.0))
        a = ir.oracle_ray_length(grid, origin, theta)
        b = ir.ray_length(grid, origin, theta)
        worst = max(worst, abs(a - b))
    assert worst <= 1e-9


def test_transpose_exchange_invariance(rng):
    for _ in range(60):
        grid = random_grid(rng, 7, 5, 0.3)
        i, j = random_open_cell(rng, grid)
        origin = (i + 0.4, j + 0.7)
        theta = float(rng.uniform(0.0, 360.0))
        a = ir.oracle_ray_length(grid, origin, theta)
        swapped = ir.OccupancyGrid(grid.cells.T.copy())
        b = ir.oracle_ray_length(swapped, (origin[1], origin[0]), (90.0 - theta) % 360.0)
        assert abs(a - b) <= 1e-12 * (1.0 + a)


def test_origin_validation(empty11):
    with pytest.raises(ValueError):
        ir.oracle_ray_length(empty11, (0.0, 5.5), 0.0)
    cells = np.ones((2, 2), dtype=bool)
    with pytest.raises(ValueError):
        ir.oracle_ray_length(ir.OccupancyGrid(cells), (0.5, 0.5), 0.0)


class TestDeltaMax:
    def test_small_open_square(self):
        grid = ir.OccupancyGrid(np.zeros((3, 3), dtype=bool))
        got = ir.oracle_delta_max(grid, (1, 1), ir.OracleConfig())
        assert got == pytest.approx(3.0 * math.sqrt(2.0), abs=1e-9)

    def test_corridor_frozen_value(self):
        grid = ir.OccupancyGrid(np.zeros((9, 1), dtype=bool))
        got = ir.oracle_delta_max(grid, (4, 0), ir.OracleConfig())
        assert got == pytest.approx(CORRIDOR_DMAX, abs=1e-12)
        assert 9.0 <= got <= math.hypot(9.0, 1.0)

    def test_dominates_kernel(self, rng):
        cfg = ir.FieldConfig(angle_step=0.5)
        for _ in range(5):
            grid = random_grid(rng, 8, 8, 0.25)
            i, j = random_open_cell(rng, grid)
            kernel = ir.max_diametric_length(grid, (int(i), int(j)), cfg)
            dense = ir.oracle_delta_max(grid, (int(i), int(j)), ir.OracleConfig())
            assert dense >= kernel - 1e-9

    def test_obstacle_cell_rejected(self):
        cells = np.zeros((2, 2), dtype=bool)
        cells[0, 0] = True
        with pytest.raises(ValueError):
            ir.oracle_delta_max(ir.OccupancyGrid(cells), (0, 0), ir.OracleConfig())


class TestOracleConfig:
    @pytest.mark.parametrize("step", [0.0, -0.001, 0.002, 1.0])
    def test_step_must_be_dense(self, step):
        with pytest.raises(ValueError):
            ir.OracleConfig(dense_angle_step=step)

    def test_mode_checked(self):
        with pytest.raises(ValueError):
            ir.OracleConfig(geometry_mode="raycast")
