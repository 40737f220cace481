"""Reference-list baseline classes used as proxy topics for ARI.

Candidate classes come from recent publications with large reference lists
that are mostly covered by the dataset; each candidate's within-dataset
references are its items. Classes addressing the same topic (bibliographic
coupling overlap at or above a threshold) are grouped and one representative
is kept per connected group, chosen at random with a fixed seed. Finally,
items appearing in several classes are assigned to the one whose items they
share the most citation relations with, making the classes pairwise disjoint.

Threshold readings (deliberate): "more than 100 references" is exclusive,
the 50% within-dataset share and 30% overlap are inclusive, and "from 2019"
includes 2019.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .leiden import Clustering
from .network import CitationNetwork
from .rng import SplitMix64

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineClass:
    """A proxy topic: the defining publication's within-dataset references."""

    class_id: str
    items: frozenset[str]

    def __post_init__(self):
        if not self.items:
            raise ValueError(f"baseline class {self.class_id!r} has no items")


@dataclass(frozen=True)
class BaselineClassSet:
    classes: tuple[BaselineClass, ...]
    assignment: dict[str, str]  # item -> class_id

    def n_items(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class SelectionLog:
    """Per-rule exclusion counts from candidate selection."""

    candidates: int
    excluded_total_refs: int
    excluded_within_share: int
    excluded_year: int


def select_candidates(network: CitationNetwork,
                      min_total_refs: int = 100,
                      min_within_share: float = 0.5,
                      min_year: int = 2019) -> tuple[list[BaselineClass], SelectionLog]:
    """Classes from publications with > min_total_refs references in total,
    at least min_within_share of them inside the dataset, published in
    min_year or later. Items are the within-dataset referenced publications."""
    out: list[BaselineClass] = []
    excl_refs = excl_share = excl_year = 0
    for pid in sorted(network.meta):
        m = network.meta[pid]
        if m.total_reference_count <= min_total_refs:
            excl_refs += 1
            continue
        within = network.ref(pid)
        if within / m.total_reference_count < min_within_share:
            excl_share += 1
            continue
        if m.year < min_year:
            excl_year += 1
            continue
        out.append(BaselineClass(class_id=pid, items=network.out_neighbors[pid]))
    log = SelectionLog(
        candidates=len(out),
        excluded_total_refs=excl_refs,
        excluded_within_share=excl_share,
        excluded_year=excl_year,
    )
    return out, log


def coupling_overlap(a: BaselineClass, b: BaselineClass) -> float:
    """Shared-reference overlap: |items_a & items_b| / min(|items_a|, |items_b|)."""
    if not a.items or not b.items:
        raise ValueError("overlap of an empty class is undefined")
    return len(a.items & b.items) / min(len(a.items), len(b.items))


def dedupe_same_topic(classes: list[BaselineClass], threshold: float = 0.3,
                      seed: int = 0) -> list[BaselineClass]:
    """Keep one representative per connected group of same-topic classes.

    Two classes are same-topic when their overlap is at or above the
    threshold; groups are connected components of that relation. The survivor
    of each group is drawn uniformly with the given seed, so the survivor set
    is reproducible and the number of survivors is seed-invariant.
    """
    classes = sorted(classes, key=lambda c: c.class_id)
    k = len(classes)
    parent = list(range(k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(k):
        for j in range(i + 1, k):
            if coupling_overlap(classes[i], classes[j]) >= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri

    comps: dict[int, list[int]] = {}
    for i in range(k):
        comps.setdefault(find(i), []).append(i)
    rng = SplitMix64(seed)
    survivors: list[BaselineClass] = []
    # components visited in order of their smallest member's class_id
    for root in sorted(comps, key=lambda r: classes[min(comps[r])].class_id):
        member_idx = sorted(comps[root])
        pick = member_idx[rng.randrange(len(member_idx))]
        survivors.append(classes[pick])
    return sorted(survivors, key=lambda c: c.class_id)


def disjoin_items(classes: list[BaselineClass],
                  network: CitationNetwork) -> BaselineClassSet:
    """Assign each contested item to the class whose items it shares the most
    citation relations with (undirected, the item itself excluded); ties go to
    the smallest class_id. Classes emptied by this step are dropped."""
    classes = sorted(classes, key=lambda c: c.class_id)
    holders: dict[str, list[BaselineClass]] = {}
    for cls in classes:
        for item in cls.items:
            holders.setdefault(item, []).append(cls)

    winner: dict[str, str] = {}
    for item, holding in holders.items():
        if len(holding) == 1:
            winner[item] = holding[0].class_id
            continue
        best_id = None
        best_score = -1
        for cls in holding:  # ascending class_id
            others = cls.items - {item}
            score = len(network.neighbors[item] & others)
            if score > best_score:
                best_score = score
                best_id = cls.class_id
        winner[item] = best_id

    final: list[BaselineClass] = []
    assignment: dict[str, str] = {}
    for cls in classes:
        kept = frozenset(i for i in cls.items if winner[i] == cls.class_id)
        if not kept:
            logger.warning("baseline class %s emptied by disjoin step", cls.class_id)
            continue
        final.append(BaselineClass(class_id=cls.class_id, items=kept))
        for item in kept:
            assignment[item] = cls.class_id
    return BaselineClassSet(classes=tuple(final), assignment=assignment)


def build_baseline(network: CitationNetwork, *,
                   min_total_refs: int = 100,
                   min_within_share: float = 0.5,
                   min_year: int = 2019,
                   overlap_threshold: float = 0.3,
                   seed: int = 0) -> tuple[BaselineClassSet, SelectionLog]:
    """Full baseline construction: select, dedupe, disjoin."""
    candidates, log = select_candidates(
        network, min_total_refs=min_total_refs,
        min_within_share=min_within_share, min_year=min_year,
    )
    survivors = dedupe_same_topic(candidates, threshold=overlap_threshold, seed=seed)
    return disjoin_items(survivors, network), log


class DelimitResult(NamedTuple):
    solution: Clustering    # clustering restricted to the baseline items
    baseline: Clustering    # baseline classes over the same item set
    dropped: int            # baseline items absent from the clustering


def delimit(clustering: Clustering, baseline: BaselineClassSet) -> DelimitResult:
    """Restrict a clustering solution and the baseline to their shared items,
    yielding two partitions of the identical item set ready for ARI."""
    present = [i for i in baseline.assignment if i in clustering.assignment]
    dropped = len(baseline.assignment) - len(present)
    if dropped:
        logger.warning("%d baseline item(s) missing from the clustering", dropped)
    if not present:
        raise ValueError("no baseline item appears in the clustering; ARI undefined")

    sol_labels: dict[str, int] = {}
    remap_sol: dict[int, int] = {}
    for item in sorted(present):
        lab = clustering.assignment[item]
        if lab not in remap_sol:
            remap_sol[lab] = len(remap_sol)
        sol_labels[item] = remap_sol[lab]

    base_labels: dict[str, int] = {}
    remap_base: dict[str, int] = {}
    for item in sorted(present):
        cid = baseline.assignment[item]
        if cid not in remap_base:
            remap_base[cid] = len(remap_base)
        base_labels[item] = remap_base[cid]

    return DelimitResult(Clustering(sol_labels), Clustering(base_labels), dropped)


def write_baseline(baseline: BaselineClassSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in sorted(baseline.assignment):
            fh.write(f"{item}\t{baseline.assignment[item]}\n")
