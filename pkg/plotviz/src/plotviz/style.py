"""Fixed rendering style so identical inputs give identical output bytes."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_APPLIED = False


def apply_style() -> None:
    global _APPLIED
    if _APPLIED:
        return
    plt.rcParams.update({
        "figure.figsize": (7.0, 4.5),
        "figure.dpi": 100,
        "savefig.dpi": 100,
        "svg.hashsalt": "plotviz",   # stable element ids in SVG output
        "font.size": 10,
        "axes.grid": True,
        "grid.alpha": 0.3,
    })
    _APPLIED = True


def save_png_and_svg(fig, out_image) -> tuple[str, str]:
    """Write the figure as PNG and SVG side by side; returns both paths."""
    from pathlib import Path

    out = Path(out_image)
    out.parent.mkdir(parents=True, exist_ok=True)
    png = out.with_suffix(".png")
    svg = out.with_suffix(".svg")
    fig.savefig(png, format="png")
    fig.savefig(svg, format="svg", metadata={"Date": None})
    return str(png), str(svg)
