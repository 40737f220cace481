"""CLI: ``plot gq`` and ``plot violin``."""

from __future__ import annotations

import argparse
import sys

from .gq import VALID_MEASURES, render_gq
from .violin import render_degree_violin


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render figures from citation-clustering evaluation CSVs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gq", help="granularity-quality curves for one measure")
    p.add_argument("--csv", required=True, help="long-format results_gq.csv")
    p.add_argument("--measure", required=True,
                   help=f"one of: {', '.join(VALID_MEASURES)}")
    p.add_argument("--out", required=True, help="output image (PNG and SVG written)")

    p = sub.add_parser("violin", help="degree distribution box-with-violin plot")
    p.add_argument("--csv", required=True, help="degrees.csv from the pipeline")
    p.add_argument("--out", required=True, help="output image (PNG and SVG written)")
    p.add_argument("--max-degree", type=int, default=100)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gq":
            png, svg = render_gq(args.csv, args.measure, args.out)
        else:
            png, svg = render_degree_violin(args.csv, args.out, args.max_degree)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(png)
    print(svg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
