"""Command-line entry point: ``ssmodes detect | segment-gray | reduce-colors``."""
from __future__ import annotations

import argparse
import logging
import sys
import time

import numpy as np

from ssmodes import netpbm
from ssmodes.detection import DetectionConfig, detect_modes
from ssmodes.image import HIERARCHIES, reduce_colors, segment_gray
from ssmodes.report import CsvError, RunReport, parse_histogram_csv, render_svg_plot, write_report_json
from ssmodes.scale_space import GRIDS
from ssmodes.thresholding import METHODS


def _epsilon(value: str):
    if value == "auto":
        return value
    try:
        eps = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {value!r}") from None
    if not eps > 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return eps


def _add_detection_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=METHODS, default="otsu")
    p.add_argument("--epsilon", type=_epsilon, default="auto", help="'auto' (1/n) or a number")
    p.add_argument("--init", choices=("random", "uniform"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--grid", choices=GRIDS, default="variance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssmodes", description="Scale-space histogram mode detection")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect modes of a histogram CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--plot")
    _add_detection_args(p)

    p = sub.add_parser("segment-gray", help="segment a PGM image by its gray-level histogram")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--labels")
    _add_detection_args(p)

    p = sub.add_parser("reduce-colors", help="reduce the colors of a PPM image")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--hierarchy", choices=HIERARCHIES, default="v")
    p.add_argument("--palette")
    _add_detection_args(p)
    return parser


def _config(args) -> DetectionConfig:
    return DetectionConfig(method=args.method, epsilon=args.epsilon, seed=args.seed,
                           init=args.init, restarts=args.restarts, grid=args.grid)


def cmd_detect(args) -> None:
    with open(args.input, encoding="utf-8") as f:
        h = parse_histogram_csv(f.read())
    cfg = _config(args)
    start = time.perf_counter()
    modes = detect_modes(h, cfg)
    elapsed = (time.perf_counter() - start) * 1000
    report = RunReport.from_modes(modes, cfg, args.input, elapsed)
    with open(args.output, "wb") as f:
        f.write(write_report_json(report))
    if args.plot:
        with open(args.plot, "wb") as f:
            f.write(render_svg_plot(h, modes, title=f"{args.input} ({cfg.method})"))
    print(f"{len(modes.boundaries)} boundaries: {modes.boundaries}")


def cmd_segment_gray(args) -> None:
    img = netpbm.read_pgm(args.input)
    seg = segment_gray(img, _config(args))
    netpbm.write_pgm(args.output, seg.render())
    if args.labels:
        np.savetxt(args.labels, seg.labels, fmt="%d", delimiter=",")
    print(f"{seg.class_means.size} classes, boundaries {seg.modes.boundaries}")


def cmd_reduce_colors(args) -> None:
    img = netpbm.read_ppm(args.input)
    out, palette = reduce_colors(img, _config(args), args.hierarchy)
    netpbm.write_ppm(args.output, out)
    if args.palette:
        with open(args.palette, "w", encoding="utf-8") as f:
            f.write("index,r,g,b\n")
            for i, (r, g, b) in enumerate(palette.colors.tolist()):
                f.write(f"{i},{r},{g},{b}\n")
    print(f"{len(palette.colors)} colors")


COMMANDS = {"detect": cmd_detect, "segment-gray": cmd_segment_gray, "reduce-colors": cmd_reduce_colors}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.restarts < 1:
        parser.print_usage(sys.stderr)
        print("error: --restarts must be >= 1", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
