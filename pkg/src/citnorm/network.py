"""Citation-network ingestion and degree bookkeeping.

Edges are directed (citing -> cited). The undirected *relation set* keeps one
entry per unordered pair even when both publications cite each other, and all
degree-style quantities downstream are derived from it:

    deg(i)  number of distinct publications i is citation-linked to
    ref(i)  within-network out-citations of i (references)
    cit(i)  within-network in-citations of i

Self-citations are dropped at load time: none of the weighting formulas is
defined for them and they would corrupt the tallies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

logger = logging.getLogger(__name__)

YEAR_MIN = 1800
YEAR_MAX = 2100
# Year assigned to metadata stubs synthesized for ids that appear in the edge
# stream but not in the publication stream (non-strict mode only).
STUB_YEAR = 0

Source = Union[str, Path, IO[str], Iterable[str]]


@dataclass(frozen=True)
class PublicationMeta:
    """Per-publication metadata.

    total_reference_count counts *all* references of the publication,
    including references that fall outside the loaded dataset.
    """

    id: str
    year: int
    total_reference_count: int


@dataclass(frozen=True)
class IngestStats:
    self_loops_dropped: int = 0
    duplicate_edges_collapsed: int = 0
    missing_pubs_stubbed: int = 0


class CitationNetwork:
    """Immutable directed citation graph plus its undirected relation view.

    Built once by :func:`load_network`; afterwards the instance is treated as
    read-only and can be shared freely across threads or worker processes.
    """

    def __init__(self, meta: dict[str, PublicationMeta],
                 directed_edges: Iterable[tuple[str, str]],
                 stats: IngestStats = IngestStats()):
        self.meta = dict(meta)
        self.directed_edges = frozenset(directed_edges)
        self.stats = stats

        out_nbrs: dict[str, set[str]] = {pid: set() for pid in self.meta}
        in_count: dict[str, int] = {pid: 0 for pid in self.meta}
        nbrs: dict[str, set[str]] = {pid: set() for pid in self.meta}
        for citing, cited in self.directed_edges:
            if citing == cited:
                raise ValueError(f"self-loop {citing!r} in directed edge set")
            if citing not in self.meta or cited not in self.meta:
                raise ValueError("directed edge references unknown publication")
            out_nbrs[citing].add(cited)
            in_count[cited] += 1
            nbrs[citing].add(cited)
            nbrs[cited].add(citing)

        self.out_neighbors = {pid: frozenset(s) for pid, s in out_nbrs.items()}
        self.neighbors = {pid: frozenset(s) for pid, s in nbrs.items()}
        self._ref = {pid: len(s) for pid, s in out_nbrs.items()}
        self._cit = in_count
        self.relation_set = frozenset(
            (a, b) if a < b else (b, a) for a, b in self.directed_edges
        )

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self.meta)

    def n_nodes(self) -> int:
        return len(self.meta)

    def n_relations(self) -> int:
        return len(self.relation_set)

    def deg(self, i: str) -> int:
        return len(self.neighbors[i])

    def ref(self, i: str) -> int:
        return self._ref[i]

    def cit(self, i: str) -> int:
        return self._cit[i]

    def cites(self, i: str, j: str) -> bool:
        return j in self.out_neighbors[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CitationNetwork):
            return NotImplemented
        return self.meta == other.meta and self.directed_edges == other.directed_edges

    def __hash__(self):
        return hash(self.directed_edges)

    def __repr__(self) -> str:
        return (f"CitationNetwork(nodes={len(self.meta)}, "
                f"directed_edges={len(self.directed_edges)}, "
                f"relations={len(self.relation_set)})")


def relation(network: CitationNetwork, i: str, j: str) -> int:
    """Binary relation r_ij = max(c_ij, c_ji); symmetric, 0/1 valued."""
    if i == j:
        raise ValueError(f"relation is undefined for a publication with itself ({i!r})")
    if i not in network.meta or j not in network.meta:
        missing = i if i not in network.meta else j
        raise KeyError(f"unknown publication {missing!r}")
    return 1 if j in network.neighbors[i] else 0


def degrees(network: CitationNetwork, i: str) -> tuple[int, int, int]:
    """(deg, ref, cit) for publication i."""
    if i not in network.meta:
        raise KeyError(f"unknown publication {i!r}")
    return network.deg(i), network.ref(i), network.cit(i)


def _iter_lines(source: Source):
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from enumerate(fh, start=1)
    else:
        yield from enumerate(source, start=1)


def _parse_pubs(source: Source, has_header: bool) -> dict[str, PublicationMeta]:
    meta: dict[str, PublicationMeta] = {}
    for lineno, raw in _iter_lines(source):
        if has_header and lineno == 1:
            continue
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(
                f"publication file line {lineno}: expected 3 tab-separated columns, got {len(parts)}"
            )
        pid, year_s, total_s = (p.strip() for p in parts)
        if not pid:
            raise ValueError(f"publication file line {lineno}: empty publication id")
        try:
            year = int(year_s)
            total = int(total_s)
        except ValueError:
            raise ValueError(
                f"publication file line {lineno}: unparsable year/reference count "
                f"({year_s!r}, {total_s!r})"
            ) from None
        if not (YEAR_MIN <= year <= YEAR_MAX):
            raise ValueError(
                f"publication file line {lineno}: year {year} outside sane range "
                f"[{YEAR_MIN}, {YEAR_MAX}]"
            )
        if total < 0:
            raise ValueError(
                f"publication file line {lineno}: negative total_reference_count {total}"
            )
        if pid in meta:
            raise ValueError(f"publication file line {lineno}: duplicate id {pid!r}")
        meta[pid] = PublicationMeta(id=pid, year=year, total_reference_count=total)
    return meta


def _parse_edges(source: Source, has_header: bool):
    for lineno, raw in _iter_lines(source):
        if has_header and lineno == 1:
            continue
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(
                f"edge file line {lineno}: expected 2 tab-separated columns, got {len(parts)}"
            )
        citing, cited = (p.strip() for p in parts)
        if not citing or not cited:
            raise ValueError(f"edge file line {lineno}: empty publication id")
        yield lineno, citing, cited


def load_network(edges_source: Source, pubs_source: Source, *,
                 has_header: bool = False, strict: bool = False) -> CitationNetwork:
    """Ingest directed edges and publication metadata into a CitationNetwork.

    Duplicate directed edges are collapsed and self-loops dropped (both
    counted in the returned network's ``stats``). In non-strict mode (the
    default), ids seen only in the edge stream get a metadata stub with
    year 0 and zero references; strict mode rejects them.
    """
    meta = _parse_pubs(pubs_source, has_header)
    edges: set[tuple[str, str]] = set()
    self_loops = 0
    duplicates = 0
    stubbed = 0
    for lineno, citing, cited in _parse_edges(edges_source, has_header):
        if citing == cited:
            self_loops += 1
            continue
        for pid in (citing, cited):
            if pid not in meta:
                if strict:
                    raise ValueError(
                        f"edge file line {lineno}: publication {pid!r} missing from "
                        f"publication file (strict mode)"
                    )
                meta[pid] = PublicationMeta(id=pid, year=STUB_YEAR, total_reference_count=0)
                stubbed += 1
        if (citing, cited) in edges:
            duplicates += 1
            continue
        edges.add((citing, cited))

    if self_loops:
        logger.warning("dropped %d self-loop edge(s)", self_loops)
    if duplicates:
        logger.warning("collapsed %d duplicate directed edge(s)", duplicates)
    if stubbed:
        logger.warning("synthesized metadata stubs for %d publication(s)", stubbed)

    stats = IngestStats(
        self_loops_dropped=self_loops,
        duplicate_edges_collapsed=duplicates,
        missing_pubs_stubbed=stubbed,
    )
    return CitationNetwork(meta, edges, stats)


def write_edge_file(network: CitationNetwork, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for citing, cited in sorted(network.directed_edges):
            fh.write(f"{citing}\t{cited}\n")


def write_pub_file(network: CitationNetwork, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pid in sorted(network.meta):
            m = network.meta[pid]
            fh.write(f"{m.id}\t{m.year}\t{m.total_reference_count}\n")


def write_degree_csv(network: CitationNetwork, dataset: str, path: str | Path) -> None:
    """Per-publication relation counts, one row per publication."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("dataset,pub_id,degree\n")
        for pid in sorted(network.meta):
            fh.write(f"{dataset},{pid},{network.deg(pid)}\n")
