"""Acceptance suite: one test per criterion, each bounded by its stated
runtime. The conftest hook prints one PASS/FAIL line per criterion at the end
of the run."""

import math
import random
import time
from io import StringIO

import pytest

from citnorm.baseline import (
    build_baseline,
    dedupe_same_topic,
    delimit,
    disjoin_items,
    select_candidates,
)
from citnorm.leiden import DEFAULT_GAMMA_SWEEP, Clustering, cpm_quality, leiden_cluster
from citnorm.metrics import (
    adjusted_rand_index,
    cluster_size_skewness,
    granularity,
    mean_silhouette,
    pia,
    silhouette_width,
)
from citnorm.network import load_network
from citnorm.normalize import (
    Approach,
    build_weighted_graph,
    default_approaches,
    weight_fractional,
    weight_geometric,
    weight_geometric_limitN,
    weight_unnormalized,
)
from citnorm.pipeline import build_config, run_pipeline
from citnorm.synth import GeneratorParams, PlantedNetwork, add_isolated, generate, hubify

from fixtures import (
    FIXTURE_GAMMAS,
    baseline_procedure_fixture,
    small_fixture_graphs,
)
from oracles import brute_force_cpm_optimum, naive_silhouette, pair_count_ari
from test_leiden import assert_connected_clusters, assert_locally_optimal
from test_synth import hub_worked_example_fixture
from util import clustering_of, make_network, star_pair_network

# Hub-heavy synthetic fixture used by the recovery/PIA ordering criteria;
# parameters were calibrated once and are frozen here together with the seeds.
HUB_FIXTURE_PARAMS = GeneratorParams(
    block_sizes=(250, 250, 250, 250), refs_per_node=6, mixing=0.05
)
HUB_FIXTURE_COUNT = 100
HUB_FIXTURE_OUT_DEGREE = 50
HUB_FIXTURE_SEEDS = (101, 202, 303)
MOST_GRANULAR_GAMMAS = (0.05, 0.01)


def test_table3_reproduction():
    start = time.time()
    table3 = {
        (1, 1): (1.00, 1.00, 1.00, 0.20),
        (10, 10): (1.00, 0.10, 0.10, 0.10),
        (100, 100): (1.00, 0.01, 0.01, 0.01),
        (1, 10): (1.00, 0.55, 0.32, 0.14),
        (1, 100): (1.00, 0.51, 0.10, 0.04),
        (10, 100): (1.00, 0.06, 0.03, 0.03),
    }
    for (deg_i, deg_j), expected in table3.items():
        net = star_pair_network(deg_i, deg_j)
        computed = (
            weight_unnormalized(net, "i", "j"),
            weight_fractional(net, "i", "j"),
            weight_geometric(net, "i", "j"),
            weight_geometric_limitN(net, "i", "j", 5),
        )
        assert tuple(round(w, 2) for w in computed) == expected, (deg_i, deg_j)
    assert time.time() - start < 1.0


def test_worked_example_hub_fixture():
    start = time.time()
    net = hub_worked_example_fixture()
    blocks = {}
    for pid in net.meta:
        blocks[pid] = 0 if pid.startswith("a") else (1 if pid[0] in "kx" else 2)
    pn = PlantedNetwork(
        network=net, planted=Clustering(blocks),
        params=GeneratorParams(block_sizes=(4, 21, 26), refs_per_node=3), seed=0,
    )
    hubbed = hubify(pn, 1, 50, seed=2)
    net2 = hubbed.network
    hub = hubbed.hub_ids[0]
    w_frac = weight_fractional(net2, hub, "a_p")
    w_geom = weight_geometric(net2, hub, "a_p")
    assert w_frac == pytest.approx(0.13, abs=0.005)
    assert w_geom == pytest.approx(0.07, abs=0.005)
    frac_ratio = w_frac / weight_fractional(net2, hub, "k_node")
    geom_ratio = w_geom / weight_geometric(net2, hub, "k_node")
    assert frac_ratio == pytest.approx(4.0, abs=0.1)
    assert geom_ratio == pytest.approx(2.3, abs=0.1)
    assert time.time() - start < 1.0


def _random_partition(rnd, items):
    k = rnd.randint(1, len(items))
    labels = {}
    shuffled = items[:]
    rnd.shuffle(shuffled)
    for idx, item in enumerate(shuffled):
        labels[item] = idx % k if idx < k else rnd.randrange(k)
    used = sorted(set(labels.values()))
    remap = {lab: i for i, lab in enumerate(used)}
    return Clustering({i: remap[l] for i, l in labels.items()})


def test_ari_oracle_1000_random_pairs():
    start = time.time()
    rnd = random.Random(2024)
    for _ in range(1000):
        n = rnd.randint(1, 10)
        items = [f"o{k}" for k in range(n)]
        p = _random_partition(rnd, items)
        q = _random_partition(rnd, items)
        assert abs(adjusted_rand_index(p, q) - pair_count_ari(p, q)) <= 1e-12
        assert adjusted_rand_index(p, p) == 1.0
    assert time.time() - start < 10.0


def test_silhouette_oracle_100_random_graphs():
    start = time.time()
    rnd = random.Random(77)
    for _ in range(100):
        n = rnd.randint(4, 50)
        nodes = [f"n{k}" for k in range(n)]
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rnd.random() < 0.12:
                    edges.append((nodes[i], nodes[j]))
        net = make_network(edges, extra_nodes=nodes)
        k = rnd.randint(2, max(2, n // 2))
        labels = [rnd.randrange(k) for _ in nodes]
        used = sorted(set(labels))
        if len(used) < 2:
            labels[0] = used[0] + 1 if used[0] == 0 else 0
            used = sorted(set(labels))
        remap = {lab: i for i, lab in enumerate(used)}
        clustering = Clustering({m: remap[l] for m, l in zip(nodes, labels)})
        for node in nodes:
            assert silhouette_width(node, clustering, net) == naive_silhouette(
                node, clustering, net
            )
    assert time.time() - start < 30.0


def test_leiden_correctness_on_fixture_set():
    start = time.time()
    for name, graph in sorted(small_fixture_graphs().items()):
        assert len(graph.nodes) <= 8
        for gamma in FIXTURE_GAMMAS:
            best, _ = brute_force_cpm_optimum(graph, gamma)
            history = []
            first = leiden_cluster(graph, gamma, seed=1, history=history)
            quality = cpm_quality(graph, first, gamma)
            assert quality == pytest.approx(best, abs=1e-9), (name, gamma)
            assert_connected_clusters(graph, first)
            assert all(b >= a - 1e-12 for a, b in zip(history, history[1:]))
            assert_locally_optimal(graph, first, gamma)
            again = leiden_cluster(graph, gamma, seed=1)
            assert again.assignment == first.assignment  # bit-identical rerun
    assert time.time() - start < 60.0


@pytest.fixture(scope="module")
def hub_sweeps():
    """Sweep results for the calibrated hub-heavy fixture, shared by the
    recovery-ordering and PIA-ordering criteria."""
    out = {}
    for seed in HUB_FIXTURE_SEEDS:
        planted_net = hubify(
            generate(HUB_FIXTURE_PARAMS, seed),
            hub_count=HUB_FIXTURE_COUNT,
            hub_out_degree=HUB_FIXTURE_OUT_DEGREE,
            seed=seed + 1,
        )
        net = planted_net.network
        per_approach = {}
        for approach in default_approaches():
            graph = build_weighted_graph(net, approach)
            rows = []
            for idx, gamma in enumerate(DEFAULT_GAMMA_SWEEP):
                clustering = leiden_cluster(graph, gamma, seed ^ idx)
                ari = adjusted_rand_index(clustering, planted_net.planted)
                pia_count = None
                if gamma in MOST_GRANULAR_GAMMAS and clustering.n_clusters() >= 2:
                    pia_count = pia(clustering, net)
                rows.append((gamma, ari, pia_count))
            per_approach[approach.label] = rows
        out[seed] = per_approach
    return out


def test_planted_recovery_ordering(hub_sweeps):
    start = time.time()
    for seed, per_approach in hub_sweeps.items():
        means = {
            label: sum(ari for _, ari, _ in rows) / len(rows)
            for label, rows in per_approach.items()
        }
        unnormalized = means.pop("unnormalized")
        for label, mean_ari in means.items():
            assert mean_ari > unnormalized, (
                f"seed {seed}: {label} mean ARI {mean_ari:.4f} not above "
                f"unnormalized {unnormalized:.4f}"
            )
    assert time.time() - start < 300.0


def test_pia_ordering(hub_sweeps):
    start = time.time()
    strict_seen = False
    for seed, per_approach in hub_sweeps.items():
        counts = {
            label: {g: p for g, _, p in per_approach[label] if p is not None}
            for label in ("fractional", "geometric", "geometric-limit5")
        }
        for gamma in MOST_GRANULAR_GAMMAS:
            frac = counts["fractional"][gamma]
            geom = counts["geometric"][gamma]
            lim5 = counts["geometric-limit5"][gamma]
            assert frac >= geom, (seed, gamma)
            assert frac >= lim5, (seed, gamma)
            if frac > geom or frac > lim5:
                strict_seen = True
    assert strict_seen
    assert time.time() - start < 300.0


def test_metric_bounds_and_degenerate_handling():
    start = time.time()
    items = [f"x{k}" for k in range(17)]
    assert granularity(clustering_of(items)) == 1 / 17
    assert granularity(clustering_of(*[[i] for i in items])) == 1.0
    skew = cluster_size_skewness(clustering_of(items[:2], items[2:5], items[5:9]))
    assert skew == (0.0, False)  # sizes {2,3,4}

    def hub_clustering(deg, within):
        edges = [("hub", f"p{k}") for k in range(within)]
        edges += [("hub", f"q{k:03d}") for k in range(deg - within)]
        own = ["hub", "filler"] + [f"p{k}" for k in range(within)]
        other = [f"q{k:03d}" for k in range(deg - within)]
        return make_network(edges, extra_nodes=own + other), clustering_of(own, other)

    net, clustering = hub_clustering(19, 0)
    assert pia(clustering, net) == 0       # 19 relations: below the threshold
    net, clustering = hub_clustering(20, 2)
    assert pia(clustering, net) == 0       # exactly 10% within: excluded
    net, clustering = hub_clustering(20, 1)
    assert pia(clustering, net) == 1       # 5% within, negative silhouette
    assert time.time() - start < 1.0


def test_baseline_procedure():
    start = time.time()
    edge_lines, pub_lines, expect = baseline_procedure_fixture()
    net = load_network(StringIO("\n".join(edge_lines) + "\n"),
                       StringIO("\n".join(pub_lines) + "\n"))

    candidates, _ = select_candidates(net)
    assert len(candidates) == expect["candidates"]
    survivors = dedupe_same_topic(candidates, threshold=0.3, seed=9)
    assert len(survivors) == expect["survivors"]
    ids = {c.class_id for c in survivors}
    assert len(ids & expect["same_topic_pair"]) == 1  # one of the 30%-pair kept

    baseline_set = disjoin_items(survivors, net)
    assert baseline_set.assignment[expect["contested_item"]] == expect["contested_winner"]
    assert sum(len(c.items) for c in baseline_set.classes) == len(baseline_set.assignment)

    graph = build_weighted_graph(net, Approach("fractional"))
    clustering = leiden_cluster(graph, 0.01, seed=3)
    result = delimit(clustering, baseline_set)
    assert set(result.solution.assignment) == set(result.baseline.assignment)
    assert result.dropped == 0
    ari = adjusted_rand_index(result.solution, result.baseline)

    # the whole procedure is reproducible for a fixed seed
    again_set, _ = build_baseline(net, seed=9)
    assert again_set.assignment == baseline_set.assignment
    again = delimit(leiden_cluster(graph, 0.01, seed=3), again_set)
    assert adjusted_rand_index(again.solution, again.baseline) == ari
    assert time.time() - start < 1.0


def test_end_to_end_determinism(tmp_path):
    start = time.time()
    data = tmp_path / "data"
    planted_net = add_isolated(
        hubify(
            generate(GeneratorParams(block_sizes=(60,) * 4, refs_per_node=5,
                                     mixing=0.1), seed=21),
            hub_count=8, hub_out_degree=25, seed=22,
        ),
        3,
    )
    from citnorm.synth import write_network_files
    paths = write_network_files(planted_net, data)

    outputs = []
    for run_dir in (tmp_path / "run1", tmp_path / "run2"):
        config = build_config({}, {
            "dataset": "synthacc",
            "edges": str(paths["edges"]),
            "pubs": str(paths["pubs"]),
            "out": str(run_dir),
            "seed": 11,
        })
        result = run_pipeline(config)
        assert not result.failures
        assert len(result.records) == 36  # six approaches, six gammas
        files = {"results.csv": (run_dir / "results.csv").read_bytes()}
        for dump in sorted(run_dir.glob("clusters_*.tsv")):
            files[dump.name] = dump.read_bytes()
        assert len(files) == 37
        outputs.append(files)
    assert outputs[0] == outputs[1]
    assert time.time() - start < 300.0
