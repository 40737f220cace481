"""Small graphs (<= 8 nodes) whose CPM optima are verified by brute force.

Every (fixture, gamma, seed in 1..3) combination below was checked against
exhaustive partition enumeration when the set was frozen; the Leiden tests
assert that equality stays intact.
"""

import random

from citnorm.normalize import WeightedGraph
from citnorm.rng import SplitMix64

# gammas at which every fixture reaches the exhaustive optimum
FIXTURE_GAMMAS = (0.05, 0.1, 0.5, 1.0, 2.0)


def graph_from(nodes, *edges) -> WeightedGraph:
    acc = {}
    for a, b, w in edges:
        key = (a, b) if a < b else (b, a)
        acc[key] = float(w)
    return WeightedGraph(nodes=tuple(sorted(nodes)), edges=acc)


def _clique(names, w=1.0):
    return [(a, b, w) for i, a in enumerate(names) for b in names[i + 1:]]


def _random_connected(seed):
    rnd = random.Random(seed)
    n = rnd.randint(6, 8)
    nodes = [f"n{k}" for k in range(n)]
    edges = []
    for i in range(1, n):  # spanning tree first, so the graph is connected
        j = rnd.randrange(i)
        edges.append((nodes[i], nodes[j], round(rnd.uniform(0.1, 1.0), 3)))
    for i in range(n):
        for j in range(i + 1, n):
            if rnd.random() < 0.3 and not any(
                {nodes[i], nodes[j]} == {a, b} for a, b, _ in edges
            ):
                edges.append((nodes[i], nodes[j], round(rnd.uniform(0.1, 1.0), 3)))
    return graph_from(nodes, *edges)


def baseline_procedure_fixture():
    """Network with five baseline candidates: two classes overlap at exactly
    30% (same-topic group of two), and one item is contested between two of
    the surviving classes with 3 vs 1 citation relations.

    Returns (edge lines, pub lines, expectations dict).
    """
    c1_items = [f"i{k:03d}" for k in range(60)]
    c2_items = c1_items[:18] + [f"j{k:03d}" for k in range(42)]
    c3_items = [f"k{k:03d}" for k in range(59)] + ["shared0"]
    c4_items = [f"l{k:03d}" for k in range(59)] + ["shared0"]
    c5_items = [f"m{k:03d}" for k in range(60)]
    classes = {
        "r1": c1_items, "r2": c2_items, "r3": c3_items,
        "r4": c4_items, "r5": c5_items,
    }
    edges = []
    for cid, items in classes.items():
        edges.extend((cid, item) for item in items)
    # contested item: 3 relations into r3's items, 1 into r4's
    edges += [("shared0", "k000"), ("shared0", "k001"), ("k002", "shared0"),
              ("shared0", "l000")]
    items = sorted({i for its in classes.values() for i in its})
    pubs = {cid: (2020, 120) for cid in classes}        # 60/120 = 50% within
    pubs.update({i: (2000, 0) for i in items})
    edge_lines = [f"{a}\t{b}" for a, b in edges]
    pub_lines = [f"{p}\t{y}\t{t}" for p, (y, t) in sorted(pubs.items())]
    expectations = {
        "candidates": 5,
        "survivors": 4,
        "same_topic_pair": {"r1", "r2"},
        "contested_item": "shared0",
        "contested_winner": "r3",
    }
    return edge_lines, pub_lines, expectations


def small_fixture_graphs() -> dict[str, WeightedGraph]:
    cyc = "abcdef"
    rng = SplitMix64(5)
    k5 = []
    for i, a in enumerate("abcde"):
        for b in "abcde"[i + 1:]:
            k5.append((a, b, 0.2 + 0.8 * rng.random()))
    fixtures = {
        "edge": graph_from("ab", ("a", "b", 0.8)),
        "triangle": graph_from("abc", *_clique("abc")),
        "path5": graph_from(
            "abcde", ("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "e", 1)
        ),
        "cycle6": graph_from(
            cyc, *[(cyc[i], cyc[(i + 1) % 6], 1.0) for i in range(6)]
        ),
        "star8": graph_from("cabdefgh", *[("c", x, 1.0) for x in "abdefgh"]),
        "two_cliques": graph_from(
            "abcdef", *_clique("abc"), *_clique("def"), ("c", "d", 1.0)
        ),
        "barbell8": graph_from(
            "abcdefgh", *_clique("abcd"), *_clique("efgh"), ("d", "e", 1.0)
        ),
        "weightedK5": graph_from("abcde", *k5),
        "blocks4x2": graph_from(
            "abcdefgh",
            ("a", "b", 1.0), ("c", "d", 1.0), ("e", "f", 1.0), ("g", "h", 1.0),
            ("b", "c", 0.2), ("d", "e", 0.2), ("f", "g", 0.2),
        ),
    }
    for s in (3, 11, 37, 55):
        fixtures[f"rand{s}"] = _random_connected(s)
    return fixtures
