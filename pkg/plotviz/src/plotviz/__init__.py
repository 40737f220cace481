"""Figure rendering for citation-clustering evaluation CSVs."""

from .gq import GQSeries, VALID_MEASURES, read_gq_series, render_gq
from .violin import read_degrees, render_degree_violin

__version__ = "0.1.0"

__all__ = [
    "GQSeries",
    "VALID_MEASURES",
    "read_degrees",
    "read_gq_series",
    "render_degree_violin",
    "render_gq",
]
