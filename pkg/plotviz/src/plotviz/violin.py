"""Box-with-violin plots of per-publication relation counts by dataset.

Input is the pipeline's degrees CSV (``dataset,pub_id,degree``; the pub_id
column is optional). Degrees outside [1, max_degree] are excluded before
drawing, matching how the underlying distributions are reported.

Each violin body carries an SVG group id of the form
``violin|<dataset>|n=<count>|min=<d>|max=<d>`` describing the data actually
drawn, so the restriction is checkable from the output file alone.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .style import apply_style, save_png_and_svg


def read_degrees(csv_path: str | Path) -> dict[str, list[int]]:
    out: dict[str, list[int]] = {}
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"dataset", "degree"}.issubset(reader.fieldnames):
            raise ValueError(f"{csv_path}: expected columns dataset,degree")
        for row in reader:
            out.setdefault(row["dataset"], []).append(int(row["degree"]))
    if not out:
        raise ValueError(f"{csv_path}: no degree rows")
    return out


def build_violin_figure(degrees_by_dataset: dict[str, list[int]], max_degree: int):
    import matplotlib.pyplot as plt

    apply_style()
    restricted = {
        ds: sorted(d for d in degs if 1 <= d <= max_degree)
        for ds, degs in sorted(degrees_by_dataset.items())
    }
    restricted = {ds: degs for ds, degs in restricted.items() if degs}
    if not restricted:
        raise ValueError(f"no degrees left in [1, {max_degree}]")

    fig, ax = plt.subplots()
    labels = list(restricted)
    data = [restricted[ds] for ds in labels]
    positions = list(range(1, len(labels) + 1))
    parts = ax.violinplot(data, positions=positions, showextrema=False, widths=0.8)
    for body, ds in zip(parts["bodies"], labels):
        body.set_gid(
            f"violin|{ds}|n={len(restricted[ds])}"
            f"|min={restricted[ds][0]}|max={restricted[ds][-1]}"
        )
        body.set_alpha(0.4)
    ax.boxplot(data, positions=positions, widths=0.25, showfliers=False)
    ax.set_xticks(positions, labels)
    ax.set_ylabel(f"relations per publication (1-{max_degree})")
    fig.tight_layout()
    return fig


def render_degree_violin(degrees_csv: str | Path, out_image: str | Path,
                         max_degree: int = 100) -> tuple[str, str]:
    """Render the violins; writes PNG and SVG, returns both paths."""
    import matplotlib.pyplot as plt

    degrees = read_degrees(degrees_csv)
    fig = build_violin_figure(degrees, max_degree)
    try:
        return save_png_and_svg(fig, out_image)
    finally:
        plt.close(fig)
