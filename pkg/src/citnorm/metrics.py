"""Clustering-quality measures.

ARI follows Hubert & Arabie's chance-corrected form computed from the
contingency table of pair counts (it can be negative, unlike the commonly
quoted [0, 1] range). Silhouette widths use the binary citation dissimilarity
(0 if two publications are relation-linked, 1 otherwise), which permits a
sparse O(deg(i) + K) evaluation per node instead of an O(n) scan. PIA counts
publications that have enough relations to be placed well (>= min_relations),
sit in a cluster holding less than max_within_share of those relations, and
have a negative silhouette.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .leiden import Clustering
from .network import CitationNetwork, relation

SILHOUETTE_SCOPES = ("with-relations", "all")


def adjusted_rand_index(p: Clustering, q: Clustering) -> float:
    """Hubert-Arabie ARI between two partitions of the same object set.

    Degenerate case (MaxIndex == ExpectedIndex, e.g. two all-singleton
    partitions): returns 1.0 if the partitions are identical, else 0.0.
    """
    if set(p.assignment) != set(q.assignment):
        raise ValueError("partitions must cover the identical object set")
    n = len(p.assignment)
    if n == 0:
        raise ValueError("partitions must be non-empty")
    cont: dict[tuple[int, int], int] = {}
    row: dict[int, int] = {}
    col: dict[int, int] = {}
    for obj, lp in p.assignment.items():
        lq = q.assignment[obj]
        cont[(lp, lq)] = cont.get((lp, lq), 0) + 1
        row[lp] = row.get(lp, 0) + 1
        col[lq] = col.get(lq, 0) + 1
    index = sum(math.comb(v, 2) for v in cont.values())
    sum_p = sum(math.comb(v, 2) for v in row.values())
    sum_q = sum(math.comb(v, 2) for v in col.values())
    total = math.comb(n, 2)
    # degeneracy test done in exact integer arithmetic:
    # (sum_p + sum_q)/2 == sum_p*sum_q/total  <=>  total*(sum_p+sum_q) == 2*sum_p*sum_q
    if total == 0 or total * (sum_p + sum_q) == 2 * sum_p * sum_q:
        same = {frozenset(ms) for ms in p.members()} == {frozenset(ms) for ms in q.members()}
        return 1.0 if same else 0.0
    expected = sum_p * sum_q / total
    max_index = (sum_p + sum_q) / 2
    return (index - expected) / (max_index - expected)


def dissimilarity(network: CitationNetwork, i: str, j: str) -> int:
    """Binary dissimilarity: 1 - r_ij."""
    return 1 - relation(network, i, j)


def _cluster_link_counts(network: CitationNetwork, clustering: Clustering,
                         i: str) -> dict[int, int]:
    """Number of i's relations landing in each cluster."""
    counts: dict[int, int] = {}
    assignment = clustering.assignment
    for nbr in network.neighbors[i]:
        lab = assignment.get(nbr)
        if lab is not None:
            counts[lab] = counts.get(lab, 0) + 1
    return counts


def silhouette_width(i: str, clustering: Clustering,
                     network: CitationNetwork) -> float:
    """s(i) = (b - a) / max(a, b) under the binary dissimilarity.

    Conventions: a publication alone in its cluster gets 0; the degenerate
    a = b = 0 case also yields 0.
    """
    if i not in clustering.assignment:
        raise KeyError(f"publication {i!r} is not assigned")
    sizes = clustering.sizes()
    if len(sizes) < 2:
        raise ValueError("silhouette width needs at least 2 clusters")
    own = clustering.assignment[i]
    own_size = sizes[own]
    if own_size == 1:
        return 0.0
    links = _cluster_link_counts(network, clustering, i)
    a = (own_size - 1 - links.get(own, 0)) / (own_size - 1)
    b = math.inf
    linked_others = 0
    for lab, cnt in links.items():
        if lab == own:
            continue
        linked_others += 1
        d = (sizes[lab] - cnt) / sizes[lab]
        if d < b:
            b = d
    if linked_others < len(sizes) - 1:
        # some other cluster receives none of i's relations: its mean
        # dissimilarity is exactly 1
        b = min(b, 1.0)
    if a == 0.0 and b == 0.0:
        return 0.0
    return (b - a) / max(a, b)


def mean_silhouette(clustering: Clustering, network: CitationNetwork,
                    scope: str = "with-relations") -> float:
    """Average s(i); default scope skips publications without any relation."""
    if scope not in SILHOUETTE_SCOPES:
        raise ValueError(f"unknown silhouette scope {scope!r}; valid: {SILHOUETTE_SCOPES}")
    if clustering.n_clusters() < 2:
        raise ValueError("mean silhouette needs at least 2 clusters")
    values = []
    for i in clustering.assignment:
        if scope == "with-relations" and network.deg(i) == 0:
            continue
        values.append(silhouette_width(i, clustering, network))
    if not values:
        raise ValueError("no publications in silhouette scope")
    return math.fsum(values) / len(values)


def pia(clustering: Clustering, network: CitationNetwork,
        min_relations: int = 20, max_within_share: float = 0.10) -> int:
    """Count of probably inaccurately assigned publications."""
    if clustering.n_clusters() < 2:
        raise ValueError("PIA needs at least 2 clusters")
    sizes = clustering.sizes()
    count = 0
    for i, own in clustering.assignment.items():
        deg = network.deg(i)
        if deg < min_relations:
            continue
        links = _cluster_link_counts(network, clustering, i)
        within = links.get(own, 0)
        if within / deg >= max_within_share:
            continue
        own_size = sizes[own]
        if own_size == 1:
            continue  # singleton convention: s(i) = 0, never negative
        a = (own_size - 1 - within) / (own_size - 1)
        b = math.inf
        linked_others = 0
        for lab, cnt in links.items():
            if lab == own:
                continue
            linked_others += 1
            d = (sizes[lab] - cnt) / sizes[lab]
            if d < b:
                b = d
        if linked_others < len(sizes) - 1:
            b = min(b, 1.0)
        if a == 0.0 and b == 0.0:
            continue
        if (b - a) / max(a, b) < 0.0:
            count += 1
    return count


def granularity(clustering: Clustering) -> float:
    """n divided by the sum of squared cluster sizes; in (0, 1]."""
    n = clustering.n_items()
    if n == 0:
        raise ValueError("granularity of an empty clustering is undefined")
    return n / sum(s * s for s in clustering.sizes())


class SkewnessResult(NamedTuple):
    value: float
    degenerate: bool


def sample_skewness(values) -> SkewnessResult:
    """Adjusted Fisher-Pearson sample skewness G1.

    Fewer than 3 observations or zero variance is degenerate: value 0 with
    the flag set.
    """
    values = list(values)
    k = len(values)
    if k < 3:
        return SkewnessResult(0.0, True)
    mean = math.fsum(values) / k
    m2 = math.fsum((x - mean) ** 2 for x in values) / k
    if m2 == 0.0:
        return SkewnessResult(0.0, True)
    m3 = math.fsum((x - mean) ** 3 for x in values) / k
    g1 = m3 / m2 ** 1.5
    return SkewnessResult(g1 * math.sqrt(k * (k - 1)) / (k - 2), False)


def cluster_size_skewness(clustering: Clustering) -> SkewnessResult:
    """G1 skewness of the cluster-size multiset."""
    return sample_skewness(clustering.sizes())


@dataclass(frozen=True)
class EvaluationRecord:
    """One (dataset, approach, gamma) evaluation row."""

    dataset: str
    approach: str
    gamma: float
    granularity: float
    ari: float | None
    mean_silhouette: float
    pia: int
    skewness: float
    n_clusters: int
    n_publications: int


EVALUATION_CSV_HEADER = (
    "dataset,approach,gamma,granularity,ari,mean_silhouette,pia,"
    "skewness,n_clusters,n_publications"
)


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def evaluation_csv_row(rec: EvaluationRecord) -> str:
    ari = "" if rec.ari is None else _fmt(rec.ari)
    return ",".join([
        rec.dataset,
        rec.approach,
        _fmt(rec.gamma),
        _fmt(rec.granularity),
        ari,
        _fmt(rec.mean_silhouette),
        str(rec.pia),
        _fmt(rec.skewness),
        str(rec.n_clusters),
        str(rec.n_publications),
    ])
