"""Constant Potts Model optimization with a deterministic Leiden implementation.

Quality of a partition under CPM at resolution gamma:

    Q = sum_c [ W_c - gamma * n_c * (n_c - 1) / 2 ]

where W_c is the total weight of intra-cluster edges and n_c the cluster size
(unit node sizes). One Leiden iteration runs local moving, refinement, and
aggregation repeatedly from the original graph until the aggregate stops
shrinking; iterations repeat until one of them changes nothing or
``max_iterations`` is reached. All randomness (move order, refinement merges)
comes from a splitmix64 generator, so a fixed (graph, gamma, seed,
max_iterations) tuple always yields bit-identical partitions.

Tie handling in local moves: a node keeps its current cluster on equal gain;
among non-current targets, equal gains resolve to the lowest cluster label.
Gains are compared with absolute tolerance 1e-12 to avoid oscillation.

Returned clusters are always connected: disconnected clusters are split into
their components as a final step (a split never decreases CPM quality since no
intra-cluster weight is lost and the pair penalty strictly shrinks).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .normalize import WeightedGraph
from .rng import SplitMix64

_EPS = 1e-12

# Resolution values swept in the evaluation pipeline, most granular first.
DEFAULT_GAMMA_SWEEP = (0.05, 0.01, 0.005, 0.001, 0.0005, 0.0001)


@dataclass(frozen=True)
class Clustering:
    """Total assignment of publication ids to dense cluster labels 0..K-1."""

    assignment: dict[str, int]

    def __post_init__(self):
        labels = set(self.assignment.values())
        if labels and labels != set(range(len(labels))):
            raise ValueError("cluster labels must be dense integers 0..K-1")

    def n_items(self) -> int:
        return len(self.assignment)

    def n_clusters(self) -> int:
        return len(set(self.assignment.values()))

    def members(self) -> list[list[str]]:
        """Member lists indexed by label; each list sorted by id."""
        out: list[list[str]] = [[] for _ in range(self.n_clusters())]
        for node in sorted(self.assignment):
            out[self.assignment[node]].append(node)
        return out

    def sizes(self) -> list[int]:
        counts = [0] * self.n_clusters()
        for lab in self.assignment.values():
            counts[lab] += 1
        return counts

    def canonicalized(self) -> "Clustering":
        """Relabel clusters by decreasing size, ties by smallest member id."""
        groups: dict[int, list[str]] = {}
        for node, lab in self.assignment.items():
            groups.setdefault(lab, []).append(node)
        ordered = sorted(groups.values(), key=lambda ms: (-len(ms), min(ms)))
        assignment: dict[str, int] = {}
        for new_lab, members in enumerate(ordered):
            for node in members:
                assignment[node] = new_lab
        return Clustering(dict(sorted(assignment.items())))


def singleton_clustering(nodes) -> Clustering:
    return Clustering({node: lab for lab, node in enumerate(sorted(nodes))})


def cpm_quality(graph: WeightedGraph, clustering: Clustering, gamma: float) -> float:
    """CPM value of a partition; requires the partition to cover exactly the graph."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if set(clustering.assignment) != set(graph.nodes):
        raise ValueError("clustering must cover exactly the graph's node set")
    intra = math.fsum(
        w for (a, b), w in graph.edges.items()
        if clustering.assignment[a] == clustering.assignment[b]
    )
    penalty = sum(n * (n - 1) // 2 for n in clustering.sizes())
    return intra - gamma * penalty


# -- internal index-based machinery -----------------------------------------

def _build_adjacency(graph: WeightedGraph):
    ids = list(graph.nodes)
    index = {pid: k for k, pid in enumerate(ids)}
    nbrs: list[list[int]] = [[] for _ in ids]
    wts: list[list[float]] = [[] for _ in ids]
    for (a, b), w in sorted(graph.edges.items()):
        if w <= 0:
            raise ValueError(f"non-positive edge weight for ({a!r}, {b!r})")
        ia, ib = index[a], index[b]
        nbrs[ia].append(ib)
        wts[ia].append(w)
        nbrs[ib].append(ia)
        wts[ib].append(w)
    return ids, nbrs, wts


def _compress_partition(flat: list[int], node_size: list[int]):
    remap: dict[int, int] = {}
    comm = [0] * len(flat)
    for v, lab in enumerate(flat):
        if lab not in remap:
            remap[lab] = len(remap)
        comm[v] = remap[lab]
    csize = [0] * len(remap)
    for v, c in enumerate(comm):
        csize[c] += node_size[v]
    return comm, csize


def _local_move(nbrs, wts, node_size, comm, csize, gamma, rng) -> bool:
    """Queue-based local moving; returns True if any node changed community."""
    n = len(nbrs)
    order = list(range(n))
    rng.shuffle(order)
    queue = deque(order)
    in_queue = [True] * n
    moved_any = False
    while queue:
        v = queue.popleft()
        in_queue[v] = False
        cv = comm[v]
        sv = node_size[v]
        wsum: dict[int, float] = {}
        for u, w in zip(nbrs[v], wts[v]):
            cu = comm[u]
            wsum[cu] = wsum.get(cu, 0.0) + w
        size_rest = csize[cv] - sv
        best_c = cv
        best_g = wsum.get(cv, 0.0) - gamma * sv * size_rest
        for c in sorted(wsum):
            if c == cv:
                continue
            g = wsum[c] - gamma * sv * csize[c]
            if g > best_g + _EPS:
                best_g = g
                best_c = c
        # escaping to a fresh singleton community has insertion gain 0
        if size_rest > 0 and 0.0 > best_g + _EPS:
            best_c = len(csize)
            csize.append(0)
        if best_c != cv:
            csize[cv] -= sv
            csize[best_c] += sv
            comm[v] = best_c
            moved_any = True
            for u in nbrs[v]:
                if comm[u] != best_c and not in_queue[u]:
                    queue.append(u)
                    in_queue[u] = True
    return moved_any


def _refine(nbrs, wts, node_size, comm, gamma, rng) -> list[int]:
    """Split each community into connected subcommunities for aggregation.

    Starts from singletons within each community; nodes still alone merge into
    a neighboring subcommunity of the same community, chosen randomly with
    probability proportional to the CPM gain among positive-gain targets.
    The community assignment itself (and hence the flat partition) is untouched.
    """
    n = len(nbrs)
    refined = list(range(n))
    rsize = node_size[:]
    rcount = [1] * n
    by_comm: dict[int, list[int]] = {}
    for v in range(n):
        by_comm.setdefault(comm[v], []).append(v)
    for c in sorted(by_comm):
        members = by_comm[c]
        if len(members) < 2:
            continue
        order = members[:]
        rng.shuffle(order)
        for v in order:
            rv = refined[v]
            if rcount[rv] != 1:
                continue
            wsum: dict[int, float] = {}
            for u, w in zip(nbrs[v], wts[v]):
                if comm[u] == c and refined[u] != rv:
                    r = refined[u]
                    wsum[r] = wsum.get(r, 0.0) + w
            if not wsum:
                continue
            sv = node_size[v]
            cands: list[int] = []
            gains: list[float] = []
            for r in sorted(wsum):
                g = wsum[r] - gamma * sv * rsize[r]
                if g > _EPS:
                    cands.append(r)
                    gains.append(g)
            if not cands:
                continue
            target = cands[rng.weighted_index(gains)]
            rcount[rv] -= 1
            refined[v] = target
            rsize[target] += sv
            rcount[target] += 1
    return refined


def _aggregate(nbrs, wts, node_size, comm, refined):
    """Collapse refined subcommunities into single nodes."""
    n = len(nbrs)
    remap: dict[int, int] = {}
    for v in range(n):
        r = refined[v]
        if r not in remap:
            remap[r] = len(remap)
    m = len(remap)
    new_size = [0] * m
    parent = [-1] * m
    for v in range(n):
        a = remap[refined[v]]
        new_size[a] += node_size[v]
        parent[a] = comm[v]
    new_comm, new_csize = _compress_partition(parent, new_size)
    acc: dict[tuple[int, int], float] = {}
    for v in range(n):
        av = remap[refined[v]]
        for u, w in zip(nbrs[v], wts[v]):
            au = remap[refined[u]]
            if av < au:
                key = (av, au)
                acc[key] = acc.get(key, 0.0) + w
    new_nbrs: list[list[int]] = [[] for _ in range(m)]
    new_wts: list[list[float]] = [[] for _ in range(m)]
    for a, b in sorted(acc):
        w = acc[(a, b)]
        new_nbrs[a].append(b)
        new_wts[a].append(w)
        new_nbrs[b].append(a)
        new_wts[b].append(w)
    return new_nbrs, new_wts, new_size, new_comm, new_csize, remap


def _one_iteration(base_nbrs, base_wts, flat, gamma, rng):
    """One Leiden iteration: (local move + refine + aggregate) cycles from the
    original graph down to a stable aggregate. Returns (new flat labels,
    whether any node moved)."""
    n = len(base_nbrs)
    nbrs, wts = base_nbrs, base_wts
    node_size = [1] * n
    comm, csize = _compress_partition(flat, node_size)
    orig_level = list(range(n))
    changed = False
    while True:
        moved = _local_move(nbrs, wts, node_size, comm, csize, gamma, rng)
        changed = changed or moved
        refined = _refine(nbrs, wts, node_size, comm, gamma, rng)
        if len(set(refined)) == len(nbrs):
            break
        nbrs, wts, node_size, comm, csize, remap = _aggregate(
            nbrs, wts, node_size, comm, refined
        )
        orig_level = [remap[refined[x]] for x in orig_level]
    return [comm[orig_level[i]] for i in range(n)], changed


def _flat_quality(nbrs, wts, flat, gamma) -> float:
    intra = []
    for v in range(len(nbrs)):
        fv = flat[v]
        for u, w in zip(nbrs[v], wts[v]):
            if u > v and flat[u] == fv:
                intra.append(w)
    counts: dict[int, int] = {}
    for lab in flat:
        counts[lab] = counts.get(lab, 0) + 1
    penalty = sum(k * (k - 1) // 2 for k in counts.values())
    return math.fsum(intra) - gamma * penalty


def _split_disconnected(nbrs, flat) -> list[int]:
    """Replace every disconnected cluster by its connected components."""
    n = len(nbrs)
    by_comm: dict[int, list[int]] = {}
    for v in range(n):
        by_comm.setdefault(flat[v], []).append(v)
    out = flat[:]
    next_label = max(by_comm, default=-1) + 1
    for c in sorted(by_comm):
        members = by_comm[c]
        member_set = set(members)
        seen: set[int] = set()
        components: list[list[int]] = []
        for start in members:
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for u in nbrs[x]:
                    if u in member_set and u not in seen:
                        seen.add(u)
                        comp.append(u)
                        queue.append(u)
            components.append(comp)
        for extra in components[1:]:
            for v in extra:
                out[v] = next_label
            next_label += 1
    return out


def leiden_cluster(graph: WeightedGraph, gamma: float, seed: int,
                   max_iterations: int = 10,
                   history: list[float] | None = None) -> Clustering:
    """Cluster a weighted graph by CPM maximization.

    If ``history`` is a list, the flat CPM quality is appended before the
    first iteration and after each one (monotone non-decreasing).
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    ids, nbrs, wts = _build_adjacency(graph)
    n = len(ids)
    if n == 0:
        return Clustering({})
    rng = SplitMix64(seed)
    flat = list(range(n))
    if history is not None:
        history.append(_flat_quality(nbrs, wts, flat, gamma))
    for _ in range(max_iterations):
        flat, changed = _one_iteration(nbrs, wts, flat, gamma, rng)
        if history is not None:
            history.append(_flat_quality(nbrs, wts, flat, gamma))
        if not changed:
            break
    flat = _split_disconnected(nbrs, flat)
    groups: dict[int, list[str]] = {}
    for v, lab in enumerate(flat):
        groups.setdefault(lab, []).append(ids[v])
    assignment: dict[str, int] = {}
    for lab, members in enumerate(groups.values()):
        for node in members:
            assignment[node] = lab
    return Clustering(assignment).canonicalized()


def resolution_sweep(graph: WeightedGraph, gammas, seed: int,
                     max_iterations: int = 10) -> list[tuple[float, Clustering]]:
    """One clustering per resolution value, each seeded as seed XOR index."""
    gammas = list(gammas)
    if not gammas:
        raise ValueError("gammas must be non-empty")
    if len(set(gammas)) != len(gammas):
        raise ValueError("duplicate gamma values in sweep")
    return [
        (g, leiden_cluster(graph, g, seed ^ i, max_iterations=max_iterations))
        for i, g in enumerate(gammas)
    ]


def write_clustering(clustering: Clustering, path: str | Path) -> None:
    """Tab-separated dump; clusters numbered by decreasing size, ties by
    smallest member id."""
    canon = clustering.canonicalized()
    with open(path, "w", encoding="utf-8") as fh:
        for node in sorted(canon.assignment):
            fh.write(f"{node}\t{canon.assignment[node]}\n")


def read_clustering(path: str | Path) -> Clustering:
    assignment: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"clustering file line {lineno}: expected 2 columns")
            node, lab = parts
            assignment[node] = int(lab)
    return Clustering(assignment)
