"""Planted-partition citation networks with skewed degree distributions.

Nodes are created in a global age order (interleaved across blocks so every
block spans the whole time range) and each new node cites older ones: mostly
inside its own block, with a configurable mixing fraction of references
landing in other blocks. Targets are drawn preferentially by in-degree, which
produces the heavy-tailed relation counts real citation data shows.

``hubify`` grafts hub nodes onto a generated network: each hub cites many
publications spread across blocks plus exactly one low-degree partner,
reproducing the configuration where a single weak neighbor can dominate a
high-degree node's cluster membership under fractional weighting.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .leiden import Clustering, write_clustering
from .network import CitationNetwork, PublicationMeta, write_edge_file, write_pub_file
from .rng import SplitMix64

YEAR_FIRST = 1995
YEAR_LAST = 2021


@dataclass(frozen=True)
class GeneratorParams:
    block_sizes: tuple[int, ...]
    refs_per_node: int = 5
    mixing: float = 0.1
    pa_exponent: float = 1.0

    def __post_init__(self):
        if len(self.block_sizes) < 1:
            raise ValueError("at least one block required")
        if any(s < 2 for s in self.block_sizes):
            raise ValueError("block sizes must be >= 2")
        if not (0.0 <= self.mixing < 1.0):
            raise ValueError("mixing fraction must lie in [0, 1)")
        if self.refs_per_node < 1:
            raise ValueError("refs_per_node must be >= 1")
        n = sum(self.block_sizes)
        if self.refs_per_node > n - 1:
            raise ValueError("degree budget exceeds network capacity")
        if self.mixing == 0.0 and self.refs_per_node > min(self.block_sizes) - 1:
            raise ValueError("degree budget exceeds block capacity at mixing 0")


@dataclass(frozen=True)
class PlantedNetwork:
    network: CitationNetwork
    planted: Clustering
    params: GeneratorParams
    seed: int
    hub_ids: tuple[str, ...] = ()


def _interleave_blocks(block_sizes: tuple[int, ...]) -> list[int]:
    """Global age order of block labels, spreading each block evenly."""
    slots = []
    for b, size in enumerate(block_sizes):
        for j in range(size):
            slots.append(((j + 0.5) / size, b, j))
    slots.sort()
    return [b for _, b, _ in slots]


def _draw_target(rng: SplitMix64, pool: list[int], indeg: list[int],
                 exponent: float, cited: set[int]) -> int | None:
    weights = [
        0.0 if v in cited else (indeg[v] + 1.0) ** exponent
        for v in pool
    ]
    if not any(w > 0.0 for w in weights):
        return None
    return pool[rng.weighted_index(weights)]


def generate(params: GeneratorParams, seed: int) -> PlantedNetwork:
    """Draw a planted network; deterministic for a fixed (params, seed)."""
    rng = SplitMix64(seed)
    labels = _interleave_blocks(params.block_sizes)
    n = len(labels)
    k = len(params.block_sizes)
    ids = [f"p{t:05d}" for t in range(n)]
    indeg = [0] * n
    older_by_block: list[list[int]] = [[] for _ in range(k)]
    edges: list[tuple[str, str]] = []
    out_count = [0] * n

    for t in range(n):
        b = labels[t]
        budget = min(params.refs_per_node, t)
        cited: set[int] = set()
        for _ in range(budget):
            cross = rng.random() < params.mixing
            other_blocks = [c for c in range(k) if c != b and older_by_block[c]]
            if cross and other_blocks:
                tb = other_blocks[rng.weighted_index(
                    [float(len(older_by_block[c])) for c in other_blocks]
                )]
            elif older_by_block[b]:
                tb = b
            elif params.mixing > 0.0 and other_blocks:
                # own block has no older member yet; at mixing 0 the edge is
                # skipped so blocks stay perfectly separated
                tb = other_blocks[rng.weighted_index(
                    [float(len(older_by_block[c])) for c in other_blocks]
                )]
            else:
                break
            target = _draw_target(rng, older_by_block[tb], indeg,
                                  params.pa_exponent, cited)
            if target is None:
                continue
            cited.add(target)
            indeg[target] += 1
            edges.append((ids[t], ids[target]))
        out_count[t] = len(cited)
        older_by_block[b].append(t)

    span = YEAR_LAST - YEAR_FIRST + 1
    meta = {
        ids[t]: PublicationMeta(
            id=ids[t],
            year=YEAR_FIRST + (t * span) // n,
            total_reference_count=out_count[t],
        )
        for t in range(n)
    }
    network = CitationNetwork(meta, edges)
    planted = Clustering({ids[t]: labels[t] for t in range(n)})
    return PlantedNetwork(network=network, planted=planted, params=params, seed=seed)


def add_isolated(planted_net: PlantedNetwork, count: int) -> PlantedNetwork:
    """Append publications without any citation relation, mirroring the large
    zero-relation share of real datasets. They are planted round-robin across
    the existing blocks and end up as singleton clusters in any solution."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return planted_net
    k = planted_net.planted.n_clusters()
    meta = dict(planted_net.network.meta)
    assignment = dict(planted_net.planted.assignment)
    for m in range(count):
        pid = f"iso{m:04d}"
        meta[pid] = PublicationMeta(id=pid, year=YEAR_LAST, total_reference_count=0)
        assignment[pid] = m % k
    return replace(
        planted_net,
        network=CitationNetwork(meta, planted_net.network.directed_edges),
        planted=Clustering(assignment),
    )


def hubify(planted_net: PlantedNetwork, hub_count: int, hub_out_degree: int,
           seed: int) -> PlantedNetwork:
    """Add hub nodes, each citing hub_out_degree publications spread across
    the blocks plus exactly one low-degree partner.

    The partner is the lowest-degree publication not already partnered (ties
    by smallest id); spread targets rotate round-robin over blocks and are
    drawn preferentially by current degree within each block. A hub's planted
    label is the majority block among its citations (ties to the smaller
    label)."""
    if hub_count == 0:
        return planted_net
    if hub_count < 0:
        raise ValueError("hub_count must be >= 0")
    if hub_out_degree < 20:
        raise ValueError("hub_out_degree must be >= 20 so hubs can trip the "
                         "PIA relation threshold")
    network = planted_net.network
    n = network.n_nodes()
    if hub_out_degree + 1 > n:
        raise ValueError("hub_out_degree exceeds the number of available targets")

    rng = SplitMix64(seed)
    k = planted_net.planted.n_clusters()
    block_of = dict(planted_net.planted.assignment)
    by_block: list[list[str]] = [[] for _ in range(k)]
    for pid in sorted(network.meta):
        by_block[block_of[pid]].append(pid)
    deg = {pid: network.deg(pid) for pid in network.meta}
    max_year = max(m.year for m in network.meta.values())

    new_edges: list[tuple[str, str]] = []
    new_meta: dict[str, PublicationMeta] = {}
    hub_labels: dict[str, int] = {}
    used_partners: set[str] = set()
    hub_ids = []

    for h in range(hub_count):
        hub_id = f"hub{h:03d}"
        hub_ids.append(hub_id)
        partner = min(
            (pid for pid in network.meta if pid not in used_partners),
            key=lambda pid: (deg[pid], pid),
        )
        used_partners.add(partner)
        chosen: set[str] = set()
        block_cursor = 0
        attempts = 0
        while len(chosen) < hub_out_degree and attempts < hub_out_degree * k + k:
            attempts += 1
            b = block_cursor % k
            block_cursor += 1
            pool = [pid for pid in by_block[b] if pid != partner and pid not in chosen]
            if not pool:
                continue
            weights = [deg[pid] + 1.0 for pid in pool]
            chosen.add(pool[rng.weighted_index(weights)])
        if len(chosen) < hub_out_degree:
            raise ValueError("could not place all hub citations")
        targets = sorted(chosen)
        for pid in targets + [partner]:
            new_edges.append((hub_id, pid))
            deg[pid] += 1
        deg[hub_id] = hub_out_degree + 1
        votes = [0] * k
        for pid in targets:
            votes[block_of[pid]] += 1
        votes[block_of[partner]] += 1
        hub_labels[hub_id] = max(range(k), key=lambda b: (votes[b], -b))
        new_meta[hub_id] = PublicationMeta(
            id=hub_id, year=max_year, total_reference_count=hub_out_degree + 1,
        )

    meta = dict(network.meta)
    meta.update(new_meta)
    combined = CitationNetwork(meta, set(network.directed_edges) | set(new_edges))
    assignment = dict(planted_net.planted.assignment)
    assignment.update(hub_labels)
    return replace(
        planted_net,
        network=combined,
        planted=Clustering(assignment),
        hub_ids=tuple(hub_ids),
    )


def write_network_files(planted_net: PlantedNetwork, out_dir: str | Path) -> dict[str, Path]:
    """Emit edges.tsv / pubs.tsv in the ingestion format plus planted.tsv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": out / "edges.tsv",
        "pubs": out / "pubs.tsv",
        "planted": out / "planted.tsv",
    }
    write_edge_file(planted_net.network, paths["edges"])
    write_pub_file(planted_net.network, paths["pubs"])
    write_clustering(planted_net.planted, paths["planted"])
    return paths
