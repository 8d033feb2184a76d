"""Axial line extraction from binary occupancy rasters.

The pipeline computes the maximum diametric length (longest free chord) at
every open cell, marks the local maxima of that field as ridge points, and
recovers ranked straight lines from them with a normal-form Hough transform.
"""

__version__ = "0.1.0"

from .grid_io import (GeometryError, OccupancyGrid, ParseError, ScalarField,
                      generate_h_shape, load_occupancy, parse_occupancy,
                      read_field_csv, sniff_format, write_field, write_pbm)
from .hough import (HoughAccumulator, HoughConfig, LineOutsideBounds,
                    LineParams, accumulator_to_pgm, hough_transform,
                    invert_line, point_to_sinusoid, rank_peaks)
from .isovist import (FieldConfig, IsovistField, compute_field,
                      max_diametric_length, ray_length, sweep_angles)
from .oracle import OracleConfig, oracle_delta_max, oracle_ray_length
from .pipeline import (EMIT_FORMATS, AxialLine, PipelineConfig, PipelineResult,
                       apply_length_threshold, emit, estimate_narrowest_street,
                       extract_axial_lines, lines_to_csv, lines_to_geojson,
                       lines_to_svg, run_pipeline)
from .ridges import RidgeMask, local_maxima, mask_points

__all__ = [
    "__version__",
    "GeometryError", "OccupancyGrid", "ParseError", "ScalarField",
    "generate_h_shape", "load_occupancy", "parse_occupancy", "read_field_csv",
    "sniff_format", "write_field", "write_pbm",
    "FieldConfig", "IsovistField", "compute_field", "max_diametric_length",
    "ray_length", "sweep_angles",
    "RidgeMask", "local_maxima", "mask_points",
    "HoughAccumulator", "HoughConfig", "LineOutsideBounds", "LineParams",
    "accumulator_to_pgm", "hough_transform", "invert_line",
    "point_to_sinusoid", "rank_peaks",
    "OracleConfig", "oracle_delta_max", "oracle_ray_length",
    "AxialLine", "EMIT_FORMATS", "PipelineConfig", "PipelineResult",
    "apply_length_threshold", "emit", "estimate_narrowest_street",
    "extract_axial_lines", "lines_to_csv", "lines_to_geojson", "lines_to_svg",
    "run_pipeline",
]
