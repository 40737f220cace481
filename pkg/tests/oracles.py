"""Independent oracles the implementation is checked against.

These deliberately avoid the code paths they verify: partitions are
enumerated exhaustively, ARI comes from explicit pair agreement counts, and
silhouettes from a dense all-pairs scan.
"""

import math
from itertools import combinations

from citnorm.leiden import Clustering, cpm_quality
from citnorm.network import relation


def set_partitions(items):
    """Every partition of ``items`` (grows as the Bell numbers)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for k in range(len(smaller)):
            yield smaller[:k] + [smaller[k] + [first]] + smaller[k + 1:]
        yield smaller + [[first]]


def brute_force_cpm_optimum(graph, gamma):
    """(best quality, one optimal partition) by exhaustive enumeration."""
    best = -math.inf
    best_part = None
    for part in set_partitions(sorted(graph.nodes)):
        assignment = {m: i for i, block in enumerate(part) for m in block}
        q = cpm_quality(graph, Clustering(assignment), gamma)
        if q > best:
            best = q
            best_part = [sorted(b) for b in part]
    return best, best_part


def pair_count_ari(p, q):
    """ARI from the four pair-agreement counts: 2(ad-bc) / ((a+b)(b+d)+(a+c)(c+d))."""
    objs = sorted(p.assignment)
    assert sorted(q.assignment) == objs
    a = b = c = d = 0
    for x, y in combinations(objs, 2):
        same_p = p.assignment[x] == p.assignment[y]
        same_q = q.assignment[x] == q.assignment[y]
        if same_p and same_q:
            a += 1
        elif same_p:
            b += 1
        elif same_q:
            c += 1
        else:
            d += 1
    denom = (a + b) * (b + d) + (a + c) * (c + d)
    if denom == 0:
        same = {frozenset(ms) for ms in p.members()} == {frozenset(ms) for ms in q.members()}
        return 1.0 if same else 0.0
    return 2.0 * (a * d - b * c) / denom


def naive_silhouette(i, clustering, network):
    """Dense per-node silhouette: all-pairs binary dissimilarities."""
    own = clustering.assignment[i]
    by_cluster = {}
    for node, lab in clustering.assignment.items():
        by_cluster.setdefault(lab, []).append(node)
    if len(by_cluster[own]) == 1:
        return 0.0
    dis = []
    for node in by_cluster[own]:
        if node != i:
            dis.append(1 - relation(network, i, node))
    a = sum(dis) / len(dis)
    b = math.inf
    for lab, members in by_cluster.items():
        if lab == own:
            continue
        dsum = sum(1 - relation(network, i, node) for node in members)
        b = min(b, dsum / len(members))
    if a == 0.0 and b == 0.0:
        return 0.0
    return (b - a) / max(a, b)


def connected_components_clustering(network):
    """Clustering by undirected connected components."""
    seen = set()
    assignment = {}
    label = 0
    for start in sorted(network.meta):
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            assignment[x] = label
            for u in sorted(network.neighbors[x]):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        label += 1
    return Clustering(assignment)
