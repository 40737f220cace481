"""Edge-weight normalization of direct citation relations.

Six approaches turn the binary relation r_ij into a positive edge weight:

    unnormalized            1
    fractional              (1/deg(i) + 1/deg(j)) / 2
    geometric               1 / sqrt(deg(i) * deg(j))
    geometric_limitN        1 / sqrt(max(deg(i), N) * max(deg(j), N))
    directional_fractional  (1/ref(citing) + 1/cit(cited)) / 2
    directional_geometric   1 / sqrt(ref(citing) * cit(cited))

deg() is the undirected relation count (not the raw out-citation count, which
disagrees with it only on reciprocal pairs). For a reciprocal pair, the two
directional case formulas are both defined; we average them, which reduces to
the single-direction definition whenever only one direction exists.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

from .network import CitationNetwork, relation

APPROACH_KINDS = (
    "unnormalized",
    "fractional",
    "geometric",
    "geometric_limitN",
    "directional_fractional",
    "directional_geometric",
)

DEFAULT_LIMIT_N = 5

_LIMIT_LABEL_RE = re.compile(r"^geometric[-_]limit(\d+)$")


@dataclass(frozen=True)
class Approach:
    """A normalization approach; ``limit`` is set only for geometric_limitN."""

    kind: str
    limit: int | None = None

    def __post_init__(self):
        if self.kind not in APPROACH_KINDS:
            raise ValueError(f"unknown approach kind {self.kind!r}")
        if self.kind == "geometric_limitN":
            if self.limit is None or self.limit < 1:
                raise ValueError("geometric_limitN requires limit N >= 1")
        elif self.limit is not None:
            raise ValueError(f"approach {self.kind!r} takes no limit parameter")

    @property
    def label(self) -> str:
        if self.kind == "geometric_limitN":
            return f"geometric-limit{self.limit}"
        return self.kind.replace("_", "-")

    @classmethod
    def parse(cls, token: str, default_limit: int = DEFAULT_LIMIT_N) -> "Approach":
        norm = token.strip().lower().replace("-", "_")
        if norm in ("geometric_limitn", "geometric_limit"):
            return cls("geometric_limitN", default_limit)
        m = _LIMIT_LABEL_RE.match(token.strip().lower())
        if m:
            return cls("geometric_limitN", int(m.group(1)))
        if norm in APPROACH_KINDS:
            return cls(norm)
        raise ValueError(
            f"unknown approach {token!r}; valid: "
            + ", ".join(a.replace("_", "-") for a in APPROACH_KINDS)
        )


def default_approaches(limit_n: int = DEFAULT_LIMIT_N) -> tuple[Approach, ...]:
    return (
        Approach("unnormalized"),
        Approach("fractional"),
        Approach("geometric"),
        Approach("geometric_limitN", limit_n),
        Approach("directional_fractional"),
        Approach("directional_geometric"),
    )


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected positively weighted graph; edge keys are sorted id pairs."""

    nodes: tuple[str, ...]
    edges: dict[tuple[str, str], float]

    def n_nodes(self) -> int:
        return len(self.nodes)

    def n_edges(self) -> int:
        return len(self.edges)


def _require_relation(network: CitationNetwork, i: str, j: str) -> None:
    if relation(network, i, j) != 1:
        raise ValueError(f"no citation relation between {i!r} and {j!r}")


def weight_unnormalized(network: CitationNetwork, i: str, j: str) -> float:
    _require_relation(network, i, j)
    return 1.0


def weight_fractional(network: CitationNetwork, i: str, j: str) -> float:
    _require_relation(network, i, j)
    return (1.0 / network.deg(i) + 1.0 / network.deg(j)) / 2.0


def weight_geometric(network: CitationNetwork, i: str, j: str) -> float:
    _require_relation(network, i, j)
    return 1.0 / math.sqrt(network.deg(i) * network.deg(j))


def weight_geometric_limitN(network: CitationNetwork, i: str, j: str, N: int) -> float:
    if N < 1:
        raise ValueError("N must be >= 1")
    _require_relation(network, i, j)
    di = max(network.deg(i), N)
    dj = max(network.deg(j), N)
    return 1.0 / math.sqrt(di * dj)


def _directional_terms(network: CitationNetwork, i: str, j: str):
    """Yield (ref(citing), cit(cited)) for each existing direction."""
    _require_relation(network, i, j)
    if network.cites(i, j):
        yield network.ref(i), network.cit(j)
    if network.cites(j, i):
        yield network.ref(j), network.cit(i)


def weight_directional_fractional(network: CitationNetwork, i: str, j: str) -> float:
    vals = [(1.0 / r + 1.0 / c) / 2.0 for r, c in _directional_terms(network, i, j)]
    return math.fsum(vals) / len(vals)


def weight_directional_geometric(network: CitationNetwork, i: str, j: str) -> float:
    vals = [1.0 / math.sqrt(r * c) for r, c in _directional_terms(network, i, j)]
    return math.fsum(vals) / len(vals)


def edge_weight(network: CitationNetwork, approach: Approach, i: str, j: str) -> float:
    if approach.kind == "unnormalized":
        return weight_unnormalized(network, i, j)
    if approach.kind == "fractional":
        return weight_fractional(network, i, j)
    if approach.kind == "geometric":
        return weight_geometric(network, i, j)
    if approach.kind == "geometric_limitN":
        return weight_geometric_limitN(network, i, j, approach.limit)
    if approach.kind == "directional_fractional":
        return weight_directional_fractional(network, i, j)
    if approach.kind == "directional_geometric":
        return weight_directional_geometric(network, i, j)
    raise ValueError(f"unknown approach kind {approach.kind!r}")


def build_weighted_graph(network: CitationNetwork, approach: Approach) -> WeightedGraph:
    """One weighted edge per relation-set entry; node set preserved."""
    edges = {}
    for a, b in sorted(network.relation_set):
        edges[(a, b)] = edge_weight(network, approach, a, b)
    return WeightedGraph(nodes=tuple(sorted(network.meta)), edges=edges)


def write_weighted_edges(graph: WeightedGraph, path: str | Path) -> None:
    """Tab-separated dump with weights at 17 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        for (a, b), w in sorted(graph.edges.items()):
            fh.write(f"{a}\t{b}\t{w:.17g}\n")
