"""Command line front end.

`isoridge extract` runs the full pipeline on a PBM/PGM raster and prints the
ranked lines; `isoridge fixture h` writes the H-shaped test raster.  Exit
codes: 0 on success, 2 when the run produced no lines, 1 on any error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .grid_io import GeometryError, ParseError, generate_h_shape, \
    load_occupancy, write_pbm
from .pipeline import (EMIT_FORMATS, PipelineConfig, emit,
                       estimate_narrowest_street, run_pipeline)

__all__ = ["main", "entrypoint"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); keep 2 for empty runs
        raise _UsageError(message)


def _pair(text: str, sep: str, cast, what: str):
    parts = text.split(sep)
    if len(parts) != 2:
        raise _UsageError(f"expected {what} as A{sep}B, got {text!r}")
    try:
        return cast(parts[0]), cast(parts[1])
    except ValueError as exc:
        raise _UsageError(f"bad {what} {text!r}: {exc}") from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="isoridge",
                     description="Axial line extraction from occupancy "
                                 "rasters via isovist ridges and Hough "
                                 "voting.")
    parser.add_argument("--version", action="version",
                        version=f"isoridge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="run the pipeline on a raster")
    ex.add_argument("input", help="PBM (P1/P4) or PGM (P2/P5) file")
    ex.add_argument("--angle-step", type=float, default=0.1,
                    help="ray sweep increment in degrees (default 0.1)")
    ex.add_argument("--theta-step", type=float, default=1.0,
                    help="Hough theta bin width in degrees (default 1)")
    ex.add_argument("--rho-bin", type=float, default=1.0,
                    help="Hough rho bin width in cells (default 1)")
    ex.add_argument("--lines", type=int, default=6,
                    help="number of ranked lines to extract (default 6)")
    ex.add_argument("--min-length", default="0",
                    help="drop lines shorter than this; 'auto' estimates "
                         "the narrowest street width (default 0)")
    ex.add_argument("--suppress", default="2,2", metavar="RHO,THETA",
                    help="suppression half-widths in bins around each peak "
                         "(default 2,2)")
    ex.add_argument("--emit", default="csv",
                    help="comma list of outputs: " + ",".join(EMIT_FORMATS))
    ex.add_argument("--out", default=".", metavar="DIR",
                    help="directory for emitted files (default .)")
    ex.add_argument("--origin", default=None, metavar="X,Y",
                    help="Hough origin (default: image center)")
    ex.add_argument("--workers", type=int, default=None,
                    help="thread cap for the field kernel")
    ex.add_argument("--clip-open", action="store_true",
                    help="trim each line to its longest open-space run")
    ex.add_argument("--pgm-cutoff", type=int, default=128,
                    help="PGM luminance below this is obstacle (default 128)")

    fx = sub.add_parser("fixture", help="write a synthetic test raster")
    fx.add_argument("shape", choices=["h"], help="fixture name")
    fx.add_argument("--canvas", default="100x100", metavar="WxH")
    fx.add_argument("--arm", default="2x96", metavar="WxH",
                    help="vertical arm size (default 2x96)")
    fx.add_argument("--bar", default="70x2", metavar="WxH",
                    help="crossbar size (default 70x2)")
    fx.add_argument("--out", required=True, metavar="FILE")
    fx.add_argument("--ascii", action="store_true",
                    help="write plain P1 instead of binary P4")
    return parser


def _run_extract(args) -> int:
    grid = load_occupancy(args.input, cutoff=args.pgm_cutoff)
    if args.min_length == "auto":
        min_length = estimate_narrowest_street(grid)
        print(f"min length (narrowest street estimate): {min_length:.3f}")
    else:
        min_length = float(args.min_length)
    emit_set = frozenset(tok for tok in args.emit.split(",") if tok)
    origin = None
    if args.origin is not None:
        origin = _pair(args.origin, ",", float, "origin")
    config = PipelineConfig(
        angle_step=args.angle_step,
        theta_step=args.theta_step,
        rho_bin=args.rho_bin,
        suppression_window=_pair(args.suppress, ",", int, "suppression"),
        origin=origin,
        num_lines=args.lines,
        min_length=min_length,
        emit=emit_set,
        clip_to_open=args.clip_open,
        workers=args.workers,
    )
    result = run_pipeline(grid, config)
    for ln in result.lines:
        (x1, y1), (x2, y2) = ln.segment
        p = ln.params
        print(f"l{p.rank}: rho={p.rho:.3f} theta={p.theta} votes={p.votes} "
              f"length={ln.length:.3f} "
              f"({x1:.3f},{y1:.3f})-({x2:.3f},{y2:.3f})")
    if result.skipped:
        print(f"skipped {len(result.skipped)} peak(s) that invert outside "
              f"the image", file=sys.stderr)
    for name, path in emit(result, grid, config, args.out).items():
        print(f"wrote {name}: {path}")
    if not result.lines:
        print("warning: no lines extracted", file=sys.stderr)
        return 2
    return 0


def _run_fixture(args) -> int:
    cw, ch = _pair(args.canvas, "x", int, "canvas size")
    aw, ah = _pair(args.arm, "x", int, "arm size")
    bw, bh = _pair(args.bar, "x", int, "bar size")
    grid = generate_h_shape(cw, ch, aw, ah, bw, bh)
    fmt = "pbm-ascii" if args.ascii else "pbm-binary"
    with open(args.out, "wb") as fh:
        fh.write(write_pbm(grid, fmt))
    print(f"wrote {args.out}: {cw}x{ch} canvas, "
          f"{grid.open_count()} open cells")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "extract":
            return _run_extract(args)
        return _run_fixture(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, GeometryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING,
                        format="%(levelname)s: %(message)s")
    sys.exit(main())
