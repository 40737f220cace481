"""Command-line interface.

Subcommands: ingest, normalize, cluster, baseline, evaluate, run, synth.
Exit codes: 0 success, 1 partial-cell failure, 2 config/IO error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import baseline as baseline_mod
from . import metrics, pipeline, synth
from .leiden import DEFAULT_GAMMA_SWEEP, leiden_cluster, read_clustering, write_clustering
from .metrics import EVALUATION_CSV_HEADER, evaluation_csv_row
from .network import load_network, write_degree_csv
from .normalize import Approach, build_weighted_graph, write_weighted_edges
from .pipeline import ConfigError

logger = logging.getLogger("citnorm")


def _add_io_flags(p, pubs_required=True):
    p.add_argument("--edges", required=True, help="tab-separated citing/cited edge file")
    p.add_argument("--pubs", required=pubs_required,
                   help="tab-separated id/year/total_reference_count file")
    p.add_argument("--has-header", action="store_true",
                   help="skip the first row of the input files")


def _parse_gammas(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citnorm",
        description="Direct-citation normalization and CPM/Leiden clustering toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a network and report/emit degree tallies")
    _add_io_flags(p)
    p.add_argument("--dataset", default="dataset")
    p.add_argument("--out", help="directory for degrees.csv (optional)")
    p.add_argument("--strict", action="store_true",
                   help="reject edges whose endpoints lack metadata")

    p = sub.add_parser("normalize", help="write the weighted edge list for one approach")
    _add_io_flags(p)
    p.add_argument("--approach", required=True)
    p.add_argument("--limit-n", type=int, default=5)
    p.add_argument("--out", required=True, help="output TSV path")

    p = sub.add_parser("cluster", help="cluster one approach across gamma values")
    _add_io_flags(p)
    p.add_argument("--approach", required=True)
    p.add_argument("--limit-n", type=int, default=5)
    p.add_argument("--gammas", default=",".join(f"{g:g}" for g in DEFAULT_GAMMA_SWEEP))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory for clustering dumps")

    p = sub.add_parser("baseline", help="build and dump the reference-list baseline")
    _add_io_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("evaluate", help="evaluate an existing clustering dump")
    _add_io_flags(p)
    p.add_argument("--clusters", required=True, help="clustering dump to evaluate")
    p.add_argument("--dataset", default="dataset")
    p.add_argument("--approach", default="external")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--silhouette-scope", choices=metrics.SILHOUETTE_SCOPES,
                   default="with-relations")
    p.add_argument("--out", help="append the CSV row to this file (default: stdout)")

    p = sub.add_parser("run", help="run the full pipeline from a config")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--dataset")
    p.add_argument("--edges")
    p.add_argument("--pubs")
    p.add_argument("--out")
    p.add_argument("--approach", action="append", dest="approaches",
                   help="repeatable; default is all six approaches")
    p.add_argument("--gammas")
    p.add_argument("--limit-n", type=int, dest="limit_n")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--silhouette-scope", choices=metrics.SILHOUETTE_SCOPES,
                   dest="silhouette_scope")
    p.add_argument("--has-header", action="store_const", const=True,
                   dest="has_header", default=None)

    p = sub.add_parser("synth", help="generate a planted synthetic dataset")
    p.add_argument("--blocks", type=int, default=4)
    p.add_argument("--block-size", type=int, default=250)
    p.add_argument("--refs", type=int, default=5)
    p.add_argument("--mixing", type=float, default=0.1)
    p.add_argument("--pa-exponent", type=float, default=1.0)
    p.add_argument("--isolated", type=int, default=0)
    p.add_argument("--hubs", type=int, default=0)
    p.add_argument("--hub-out-degree", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    return parser


def _cmd_ingest(args) -> int:
    network = load_network(args.edges, args.pubs, has_header=args.has_header,
                           strict=args.strict)
    print(f"nodes\t{network.n_nodes()}")
    print(f"directed_edges\t{len(network.directed_edges)}")
    print(f"relations\t{network.n_relations()}")
    print(f"self_loops_dropped\t{network.stats.self_loops_dropped}")
    print(f"duplicates_collapsed\t{network.stats.duplicate_edges_collapsed}")
    print(f"missing_pubs_stubbed\t{network.stats.missing_pubs_stubbed}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_degree_csv(network, args.dataset, out / "degrees.csv")
        print(f"degrees_csv\t{out / 'degrees.csv'}")
    return 0


def _cmd_normalize(args) -> int:
    network = load_network(args.edges, args.pubs, has_header=args.has_header)
    approach = Approach.parse(args.approach, args.limit_n)
    graph = build_weighted_graph(network, approach)
    write_weighted_edges(graph, args.out)
    print(f"wrote {graph.n_edges()} weighted edges to {args.out}")
    return 0


def _cmd_cluster(args) -> int:
    network = load_network(args.edges, args.pubs, has_header=args.has_header)
    approach = Approach.parse(args.approach, args.limit_n)
    graph = build_weighted_graph(network, approach)
    gammas = _parse_gammas(args.gammas)
    if not gammas:
        raise ConfigError("no gamma values given")
    if len(set(gammas)) != len(gammas):
        raise ConfigError("duplicate gamma values")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for idx, gamma in enumerate(gammas):
        clustering = leiden_cluster(graph, gamma, args.seed ^ idx)
        path = out / f"clusters_{approach.label}_gamma{gamma:g}.tsv"
        write_clustering(clustering, path)
        print(f"gamma={gamma:g}\tclusters={clustering.n_clusters()}\t{path}")
    return 0


def _cmd_baseline(args) -> int:
    network = load_network(args.edges, args.pubs, has_header=args.has_header)
    baseline_set, sel_log = baseline_mod.build_baseline(network, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    baseline_mod.write_baseline(baseline_set, out / "baseline.tsv")
    with open(out / "baseline_log.json", "w", encoding="utf-8") as fh:
        json.dump({
            "classes_after_disjoin": len(baseline_set.classes),
            "items_after_disjoin": baseline_set.n_items(),
            "selection": {
                "candidates": sel_log.candidates,
                "excluded_total_refs": sel_log.excluded_total_refs,
                "excluded_within_share": sel_log.excluded_within_share,
                "excluded_year": sel_log.excluded_year,
            },
            "seed": args.seed,
        }, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"baseline classes: {len(baseline_set.classes)}, "
          f"items: {baseline_set.n_items()}")
    return 0


def _cmd_evaluate(args) -> int:
    network = load_network(args.edges, args.pubs, has_header=args.has_header)
    clustering = read_clustering(args.clusters)
    baseline_set, _ = baseline_mod.build_baseline(network, seed=args.seed)
    config = pipeline.PipelineConfig(
        dataset=args.dataset, edges=Path(args.edges), pubs=Path(args.pubs),
        out_dir=Path("."), silhouette_scope=args.silhouette_scope,
        seed=args.seed, has_header=args.has_header,
    )
    record, notes = pipeline.evaluate_clustering(
        network, clustering, baseline_set, config, args.approach, args.gamma
    )
    row = evaluation_csv_row(record)
    if args.out:
        path = Path(args.out)
        write_header = not path.exists()
        with open(path, "a", encoding="utf-8") as fh:
            if write_header:
                fh.write(EVALUATION_CSV_HEADER + "\n")
            fh.write(row + "\n")
    else:
        print(EVALUATION_CSV_HEADER)
        print(row)
    for note in notes:
        logger.warning("%s", note)
    return 0


def _cmd_run(args) -> int:
    file_values = pipeline.read_config_file(args.config) if args.config else {}
    overrides = {
        "dataset": args.dataset,
        "edges": args.edges,
        "pubs": args.pubs,
        "out": args.out,
        "approaches": args.approaches,
        "gammas": args.gammas,
        "limit_n": args.limit_n,
        "seed": args.seed,
        "jobs": args.jobs,
        "silhouette_scope": args.silhouette_scope,
        "has_header": args.has_header,
    }
    config = pipeline.build_config(file_values, overrides)
    result = pipeline.run_pipeline(config)
    print(f"cells ok: {len(result.records)}, failed: {len(result.failures)}")
    for label, gamma, err in result.failures:
        print(f"FAILED {label} gamma={gamma:g}: {err}", file=sys.stderr)
    for note in result.notes:
        print(f"note: {note}")
    if not result.records:
        return 1
    return 1 if result.failures else 0


def _cmd_synth(args) -> int:
    params = synth.GeneratorParams(
        block_sizes=tuple([args.block_size] * args.blocks),
        refs_per_node=args.refs,
        mixing=args.mixing,
        pa_exponent=args.pa_exponent,
    )
    planted_net = synth.generate(params, args.seed)
    if args.hubs:
        planted_net = synth.hubify(planted_net, args.hubs, args.hub_out_degree,
                                   args.seed + 1)
    # isolated nodes go in last so hubs cannot pick them as partners
    if args.isolated:
        planted_net = synth.add_isolated(planted_net, args.isolated)
    paths = synth.write_network_files(planted_net, args.out)
    net = planted_net.network
    print(f"nodes\t{net.n_nodes()}")
    print(f"relations\t{net.n_relations()}")
    for name, path in paths.items():
        print(f"{name}\t{path}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "normalize": _cmd_normalize,
    "cluster": _cmd_cluster,
    "baseline": _cmd_baseline,
    "evaluate": _cmd_evaluate,
    "run": _cmd_run,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
