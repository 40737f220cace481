import csv
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from plotviz.violin import build_violin_figure, read_degrees, render_degree_violin

DATA = Path(__file__).parent / "data"
DEGREES_CSV = DATA / "degrees.csv"
SVG_NS = "{http://www.w3.org/2000/svg}"


def violin_gids(svg_path):
    root = ET.parse(svg_path).getroot()
    out = {}
    for g in root.iter(f"{SVG_NS}g"):
        gid = g.get("id", "")
        if gid.startswith("violin|"):
            _, dataset, n, mn, mx = gid.split("|")
            out[dataset] = {
                "n": int(n.removeprefix("n=")),
                "min": int(mn.removeprefix("min=")),
                "max": int(mx.removeprefix("max=")),
            }
    return out


def expected_restricted(max_degree):
    by_ds = {}
    with open(DEGREES_CSV, newline="") as fh:
        for row in csv.DictReader(fh):
            d = int(row["degree"])
            if 1 <= d <= max_degree:
                by_ds.setdefault(row["dataset"], []).append(d)
    return by_ds


def test_violin_respects_degree_restriction(tmp_path):
    png, svg = render_degree_violin(DEGREES_CSV, tmp_path / "violin.png")
    assert Path(png).is_file()
    drawn = violin_gids(svg)
    expected = expected_restricted(100)
    assert set(drawn) == set(expected)
    raw = read_degrees(DEGREES_CSV)
    for dataset, stats in drawn.items():
        assert stats["n"] == len(expected[dataset])
        assert stats["min"] == min(expected[dataset]) >= 1
        assert stats["max"] == max(expected[dataset]) <= 100
        # the fixture contains out-of-range degrees that must be excluded
        assert stats["n"] < len(raw[dataset])
    assert max(d for degs in raw.values() for d in degs) > 100


def test_max_degree_flag_changes_the_cut(tmp_path):
    _, svg = render_degree_violin(DEGREES_CSV, tmp_path / "v.png", max_degree=10)
    drawn = violin_gids(svg)
    assert all(stats["max"] <= 10 for stats in drawn.values())


def test_constant_degrees_render(tmp_path):
    path = tmp_path / "deg.csv"
    path.write_text("dataset,pub_id,degree\n" +
                    "".join(f"flat,p{k},5\n" for k in range(12)))
    _, svg = render_degree_violin(path, tmp_path / "flat.png")
    drawn = violin_gids(svg)
    assert drawn == {"flat": {"n": 12, "min": 5, "max": 5}}


def test_empty_after_restriction_errors(tmp_path):
    path = tmp_path / "deg.csv"
    path.write_text("dataset,pub_id,degree\nbig,p1,500\nbig,p2,0\n")
    with pytest.raises(ValueError, match="no degrees left"):
        render_degree_violin(path, tmp_path / "x.png")


def test_missing_columns_rejected(tmp_path):
    path = tmp_path / "deg.csv"
    path.write_text("name,count\nfoo,3\n")
    with pytest.raises(ValueError, match="expected columns"):
        read_degrees(path)


def test_violin_rendering_is_deterministic(tmp_path):
    p1, s1 = render_degree_violin(DEGREES_CSV, tmp_path / "a.png")
    p2, s2 = render_degree_violin(DEGREES_CSV, tmp_path / "b.png")
    assert Path(s1).read_bytes() == Path(s2).read_bytes()
    assert Path(p1).read_bytes() == Path(p2).read_bytes()
