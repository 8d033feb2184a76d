"""Raster parsing, the H fixture generator, and field serialization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

import isoridge as ir


class TestParsePBMAscii:
    def test_two_by_two_example(self):
        grid = ir.parse_occupancy(b"P1\n2 2\n0 1\n1 0\n", "pbm-ascii")
        assert grid.width == 2 and grid.height == 2
        # file row 0 is the TOP row, i.e. j = height-1
        assert grid.is_obstacle(1, 1)      # first row "0 1"
        assert grid.is_obstacle(0, 0)      # second row "1 0"
        assert not grid.is_obstacle(0, 1)
        assert not grid.is_obstacle(1, 0)

    def test_all_open(self):
        grid = ir.parse_occupancy(b"P1\n3 3\n" + b"0 " * 9, "pbm-ascii")
        assert grid.open_count() == 9

    def test_whitespace_and_comments(self):
        data = b"P1\n# a comment\n 2\t1 \n#another\n1 0\n"
        grid = ir.parse_occupancy(data, "pbm-ascii")
        assert grid.is_obstacle(0, 0) and not grid.is_obstacle(1, 0)

    def test_missing_value_reports_offset(self):
        with pytest.raises(ir.ParseError, match=r"byte offset"):
            ir.parse_occupancy(b"P1\n2 2\n0 1\n1\n", "pbm-ascii")

    def test_bad_digit(self):
        with pytest.raises(ir.ParseError):
            ir.parse_occupancy(b"P1\n1 1\n7\n", "pbm-ascii")

    def test_wrong_magic(self):
        with pytest.raises(ir.ParseError):
            ir.parse_occupancy(b"P4\n1 1\n\x00", "pbm-ascii")

    def test_zero_dimension(self):
        with pytest.raises(ir.ParseError):
            ir.parse_occupancy(b"P1\n0 2\n", "pbm-ascii")


class TestParsePBMBinary:
    def test_row_padding(self):
        # 9 columns: each row packed into 2 bytes, MSB first
        data = b"P4\n9 2\n" + bytes([0b10000000, 0b10000000, 0x00, 0x00])
        grid = ir.parse_occupancy(data, "pbm-binary")
        assert grid.is_obstacle(0, 1)
        assert grid.is_obstacle(8, 1)
        assert grid.open_count() == 16

    def test_truncated_payload(self):
        with pytest.raises(ir.ParseError):
            ir.parse_occupancy(b"P4\n9 2\n\x00\x00\x00", "pbm-binary")


class TestParsePGM:
    def test_threshold_default_cutoff(self):
        data = b"P2\n2 1\n255\n127 128\n"
        grid = ir.parse_occupancy(data, "pgm-threshold")
        assert grid.is_obstacle(0, 0)          # 127 < 128
        assert not grid.is_obstacle(1, 0)      # 128 >= 128

    def test_custom_cutoff(self):
        data = b"P2\n2 1\n255\n10 200\n"
        grid = ir.parse_occupancy(data, "pgm-threshold", cutoff=201)
        assert grid.open_count() == 0

    def test_binary_two_byte_samples(self):
        # P5 with maxval > 255 stores big-endian 16-bit samples
        data = b"P5\n2 1\n65535\n" + (100).to_bytes(2, "big") + (60000).to_bytes(2, "big")
        grid = ir.parse_occupancy(data, "pgm-threshold")
        assert grid.is_obstacle(0, 0) and not grid.is_obstacle(1, 0)

    def test_sample_above_maxval(self):
        with pytest.raises(ir.ParseError):
            ir.parse_occupancy(b"P2\n1 1\n100\n101\n", "pgm-threshold")

    def test_truncated_binary(self):
        with pytest.raises(ir.ParseError):
            ir.parse_occupancy(b"P5\n2 2\n255\n\x00\x00\x00", "pgm-threshold")


def test_sniff_format():
    assert ir.sniff_format(b"P1\n1 1\n0\n") == "pbm-ascii"
    assert ir.sniff_format(b"P4\n1 1\n\x00") == "pbm-binary"
    assert ir.sniff_format(b"P2\n1 1\n1\n0\n") == "pgm-threshold"
    assert ir.sniff_format(b"P5\n1 1\n1\n\x00") == "pgm-threshold"
    with pytest.raises(ir.ParseError):
        ir.sniff_format(b"P7\nwhatever")


@settings(max_examples=60, deadline=None)
@given(hnp.arrays(np.bool_, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=9)))
def test_pbm_round_trip(bits):
    grid = ir.OccupancyGrid(bits.copy())
    for fmt in ("pbm-ascii", "pbm-binary"):
        back = ir.parse_occupancy(ir.write_pbm(grid, fmt), fmt)
        assert np.array_equal(back.cells, grid.cells)


def test_is_obstacle_out_of_bounds(empty11):
    assert empty11.is_obstacle(-1, 0)
    assert empty11.is_obstacle(0, 11)


class TestHShape:
    def test_open_count_matches_rectangles(self):
        grid = ir.generate_h_shape(10, 10, 2, 8, 4, 2)
        # independent rasterization: cell open iff its center lies in one
        # of the three rectangles that make up the H
        bar_x0, bar_y0 = (10 - 4) // 2, (10 - 2) // 2
        rects = [
            (bar_x0, bar_y0, bar_x0 + 4, bar_y0 + 2),
            (bar_x0 - 2, (10 - 8) // 2, bar_x0, (10 - 8) // 2 + 8),
            (bar_x0 + 4, (10 - 8) // 2, bar_x0 + 6, (10 - 8) // 2 + 8),
        ]
        for i in range(10):
            for j in range(10):
                x, y = i + 0.5, j + 0.5
                inside = any(x0 < x < x1 and y0 < y < y1 for x0, y0, x1, y1 in rects)
                assert grid.is_obstacle(i, j) == (not inside), (i, j)
        assert grid.open_count() == 2 * 2 * 8 + 4 * 2

    def test_default_open_count(self):
        grid = ir.generate_h_shape()
        assert (grid.width, grid.height) == (100, 100)
        assert grid.open_count() == 2 * 2 * 96 + 70 * 2

    def test_mirror_symmetry(self):
        grid = ir.generate_h_shape(100, 100, 20, 90, 40, 20)
        assert np.array_equal(grid.cells, grid.cells[::-1, :])
        assert np.array_equal(grid.cells, grid.cells[:, ::-1])

    def test_arm_taller_than_canvas(self):
        with pytest.raises(ir.GeometryError):
            ir.generate_h_shape(10, 10, 2, 12, 4, 2)

    def test_odd_clearance_rejected(self):
        # canvas 10, arm 7: clearance 3 cannot be split evenly
        with pytest.raises(ir.GeometryError):
            ir.generate_h_shape(10, 10, 2, 7, 4, 2)

    def test_bar_wider_than_canvas(self):
        with pytest.raises(ir.GeometryError):
            ir.generate_h_shape(10, 10, 2, 8, 20, 2)


class TestWriteField:
    def test_single_value_maps_to_full_scale(self):
        fld = ir.ScalarField(np.array([[5.0]]))
        data = ir.write_field(fld, "pgm-16")
        assert data.startswith(b"P5\n1 1\n65535\n")
        assert data.endswith((65535).to_bytes(2, "big"))

    def test_zero_to_max_scaling(self):
        fld = ir.ScalarField(np.array([[0.0], [2.0]]))  # 2 wide, 1 tall
        data = ir.write_field(fld, "pgm-16")
        payload = data.split(b"65535\n", 1)[1]
        assert payload == (0).to_bytes(2, "big") + (65535).to_bytes(2, "big")

    def test_nan_becomes_black(self):
        fld = ir.ScalarField(np.array([[np.nan], [3.0]]))
        data = ir.write_field(fld, "pgm-16")
        payload = data.split(b"65535\n", 1)[1]
        assert payload[:2] == b"\x00\x00"

    def test_csv_nan_empty_cell(self):
        fld = ir.ScalarField(np.array([[1.0], [np.nan]]))  # cells (0,0)=1, (1,0)=NaN
        assert ir.write_field(fld, "csv") == b"1.000000,\n"

    def test_csv_row_order_top_first(self):
        vals = np.array([[1.0, 3.0], [2.0, 4.0]])  # (i, j) indexing, j up
        text = ir.write_field(ir.ScalarField(vals), "csv").decode()
        rows = [r for r in text.splitlines()]
        assert rows[0] == "3.000000,4.000000"   # top row is j = 1
        assert rows[1] == "1.000000,2.000000"

    def test_csv_round_trip(self, rng):
        vals = rng.random((5, 4)) * 20
        vals[rng.random((5, 4)) < 0.3] = np.nan
        back = ir.read_field_csv(ir.write_field(ir.ScalarField(vals), "csv"))
        assert back.values.shape == (5, 4)
        m = ~np.isnan(vals)
        assert np.array_equal(np.isnan(back.values), ~m)
        assert np.allclose(back.values[m], vals[m], rtol=1e-5, atol=1e-6)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            ir.write_field(ir.ScalarField(np.zeros((1, 1))), "png")


def test_load_occupancy(tmp_path):
    p = tmp_path / "g.pbm"
    p.write_bytes(b"P1\n2 1\n0 1\n")
    grid = ir.load_occupancy(p)
    assert grid.is_obstacle(1, 0) and not grid.is_obstacle(0, 0)
