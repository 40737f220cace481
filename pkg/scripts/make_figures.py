#!/usr/bin/env python3
"""Render the figure set from a finished pipeline run directory.

Requires the companion plotviz package (see plotviz/README.md); the figures
are drawn purely from the CSVs the pipeline wrote.

Usage:
    python3 scripts/make_figures.py --run RUNDIR [--out FIGDIR]
"""

import argparse
import shutil
import subprocess
import sys
from pathlib import Path


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--run", required=True, help="pipeline output directory")
    ap.add_argument("--out", default=None, help="figure directory (default: RUNDIR/figures)")
    args = ap.parse_args()

    run_dir = Path(args.run)
    gq_csv = run_dir / "results_gq.csv"
    degrees_csv = run_dir / "degrees.csv"
    if not gq_csv.is_file():
        print(f"error: {gq_csv} not found; run the pipeline first", file=sys.stderr)
        return 2
    if shutil.which("plot") is None:
        print("error: the 'plot' command is missing; install the plotviz package "
              "(pip install -e ./plotviz --no-build-isolation)", file=sys.stderr)
        return 2

    fig_dir = Path(args.out) if args.out else run_dir / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)

    rc = 0
    for measure in ("skewness", "ari", "mean_silhouette", "pia"):
        cmd = ["plot", "gq", "--csv", str(gq_csv), "--measure", measure,
               "--out", str(fig_dir / f"gq_{measure}.png")]
        rc |= subprocess.run(cmd).returncode
    if degrees_csv.is_file():
        rc |= subprocess.run(["plot", "violin", "--csv", str(degrees_csv),
                              "--out", str(fig_dir / "degree_violin.png")]).returncode
    print(f"figures written to {fig_dir}")
    return rc


if __name__ == "__main__":
    sys.exit(main())
