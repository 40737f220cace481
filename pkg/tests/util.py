"""Builders shared across test modules."""

from io import StringIO

from citnorm.leiden import Clustering
from citnorm.network import load_network
from citnorm.normalize import WeightedGraph


def make_network(edges, pubs=None, extra_nodes=(), strict=False):
    """CitationNetwork from directed (citing, cited) pairs.

    ``pubs`` maps id -> (year, total_reference_count); nodes not listed get
    (2000, 0).
    """
    nodes = sorted({n for e in edges for n in e} | set(extra_nodes))
    meta = {n: (2000, 0) for n in nodes}
    if pubs:
        meta.update(pubs)
        for n in pubs:
            if n not in nodes:
                nodes.append(n)
    edge_text = "".join(f"{a}\t{b}\n" for a, b in edges)
    pub_text = "".join(
        f"{n}\t{meta[n][0]}\t{meta[n][1]}\n" for n in sorted(set(nodes))
    )
    return load_network(StringIO(edge_text), StringIO(pub_text), strict=strict)


def star_pair_network(deg_i, deg_j):
    """Network where nodes 'i' and 'j' are related and have the given
    undirected relation counts (leaves pad the degrees)."""
    edges = [("i", "j")]
    for k in range(deg_i - 1):
        edges.append(("i", f"li{k:03d}"))
    for k in range(deg_j - 1):
        edges.append(("j", f"lj{k:03d}"))
    return make_network(edges)


def make_graph(weighted_edges, extra_nodes=()):
    """WeightedGraph from (a, b, w) triples."""
    edges = {}
    nodes = set(extra_nodes)
    for a, b, w in weighted_edges:
        key = (a, b) if a < b else (b, a)
        edges[key] = float(w)
        nodes.update((a, b))
    return WeightedGraph(nodes=tuple(sorted(nodes)), edges=edges)


def clustering_of(*groups):
    """Clustering from explicit member groups."""
    return Clustering({m: i for i, g in enumerate(groups) for m in g})
