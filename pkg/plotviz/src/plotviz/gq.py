"""Granularity-quality line plots from the pipeline's long-format CSV.

One smoothed curve per normalization approach over a log-scaled granularity
axis, control points overplotted. The curves are monotone-preserving cubics
(PCHIP) through the control points; the renderer never recomputes any metric,
it draws exactly what the CSV says.

SVG output carries machine-readable group ids so tests can verify structure:
``gqcurve|<approach>`` for each curve and ``gqpoints|<approach>`` for its
control-point markers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from .style import apply_style, save_png_and_svg

VALID_MEASURES = ("ari", "mean_silhouette", "pia", "skewness")


@dataclass(frozen=True)
class GQSeries:
    """Control points of one measure for one approach, sorted by granularity."""

    approach: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if any(g <= 0 for g, _ in self.points):
            raise ValueError(f"non-positive granularity in series {self.approach!r}")
        if list(self.points) != sorted(self.points, key=lambda p: p[0]):
            raise ValueError(f"points of {self.approach!r} not sorted by granularity")


def read_gq_series(csv_path: str | Path, measure: str) -> list[GQSeries]:
    if measure not in VALID_MEASURES:
        raise ValueError(
            f"unknown measure {measure!r}; valid measures: {', '.join(VALID_MEASURES)}"
        )
    rows: dict[str, list[tuple[float, float]]] = {}
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"approach", "gamma", "granularity", "measure", "value"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{csv_path}: expected columns {sorted(required)}")
        for row in reader:
            if row["measure"] != measure:
                continue
            rows.setdefault(row["approach"], []).append(
                (float(row["granularity"]), float(row["value"]))
            )
    if not rows:
        raise ValueError(f"no rows for measure {measure!r} in {csv_path}")
    series = []
    for approach in sorted(rows):
        points = sorted(rows[approach], key=lambda p: p[0])
        if len(points) < 2:
            raise ValueError(
                f"approach {approach!r} has fewer than 2 control points for "
                f"{measure!r}"
            )
        series.append(GQSeries(approach=approach, points=tuple(points)))
    return series


def _smooth_curve(points):
    """Dense PCHIP samples through the control points on a log-granularity
    axis; duplicate granularities are averaged (PCHIP needs strict order)."""
    by_g: dict[float, list[float]] = {}
    for g, v in points:
        by_g.setdefault(g, []).append(v)
    xs = sorted(by_g)
    ys = [sum(by_g[g]) / len(by_g[g]) for g in xs]
    if len(xs) < 2:
        return np.array(xs), np.array(ys)
    logx = np.log10(xs)
    interp = PchipInterpolator(logx, ys)
    dense = np.linspace(logx[0], logx[-1], 200)
    return 10.0 ** dense, interp(dense)


def build_gq_figure(series: list[GQSeries], measure: str):
    import matplotlib.pyplot as plt

    apply_style()
    fig, ax = plt.subplots()
    for s in series:
        xs = [g for g, _ in s.points]
        ys = [v for _, v in s.points]
        cx, cy = _smooth_curve(s.points)
        (line,) = ax.plot(cx, cy, label=s.approach, linewidth=1.4)
        line.set_gid(f"gqcurve|{s.approach}")
        scatter = ax.scatter(xs, ys, s=16, color=line.get_color(), zorder=3)
        scatter.set_gid(f"gqpoints|{s.approach}")
    ax.set_xscale("log")
    ax.set_xlabel("granularity")
    ax.set_ylabel(measure)
    if measure == "pia":
        ax.set_ylim(bottom=0)  # counts
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render_gq(gq_csv: str | Path, measure: str, out_image: str | Path) -> tuple[str, str]:
    """Render one measure; writes PNG and SVG, returns both paths."""
    import matplotlib.pyplot as plt

    series = read_gq_series(gq_csv, measure)
    fig = build_gq_figure(series, measure)
    try:
        return save_png_and_svg(fig, out_image)
    finally:
        plt.close(fig)
