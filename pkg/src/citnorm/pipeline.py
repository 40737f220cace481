"""Full evaluation pipeline: ingest, normalize, sweep-cluster, baseline, evaluate.

A run is driven by a PipelineConfig (flat key=value file with ``#`` comments,
overridable by CLI flags) and writes, under the output directory:

    results.csv        one EvaluationRecord row per (approach, gamma) cell
    results_gq.csv     long-format granularity-quality control points
    clusters_*.tsv     one clustering dump per cell
    baseline.tsv       item -> class assignment of the reference-list baseline
    baseline_log.json  per-rule exclusion counts from candidate selection
    degrees.csv        per-publication relation counts (for the violin plots)
    run_manifest.json  config echo, per-cell seeds/status, input content hashes

Outputs contain no timestamps; for fixed inputs, config, and seed every
output byte is reproducible. Cell failures are recorded in the manifest and
do not stop other cells.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import baseline as baseline_mod
from . import metrics
from .leiden import DEFAULT_GAMMA_SWEEP, Clustering, leiden_cluster, write_clustering
from .network import CitationNetwork, load_network, write_degree_csv
from .normalize import Approach, build_weighted_graph, default_approaches
from .metrics import EVALUATION_CSV_HEADER, EvaluationRecord, evaluation_csv_row

logger = logging.getLogger(__name__)

GQ_CSV_HEADER = "approach,gamma,granularity,measure,value"
GQ_MEASURES = ("ari", "mean_silhouette", "pia", "skewness")


class ConfigError(Exception):
    """Invalid configuration or unreadable input; maps to exit code 2."""


@dataclass
class PipelineConfig:
    dataset: str
    edges: Path
    pubs: Path
    out_dir: Path
    approaches: tuple[Approach, ...] = ()
    gammas: tuple[float, ...] = DEFAULT_GAMMA_SWEEP
    seed: int = 0
    limit_n: int = 5
    min_total_refs: int = 100
    min_within_share: float = 0.5
    min_year: int = 2019
    overlap_threshold: float = 0.3
    pia_min_relations: int = 20
    pia_max_within_share: float = 0.10
    silhouette_scope: str = "with-relations"
    jobs: int = 1
    has_header: bool = False

    def __post_init__(self):
        if not self.approaches:
            self.approaches = default_approaches(self.limit_n)

    def validate(self) -> None:
        if not self.dataset:
            raise ConfigError("dataset name must be non-empty")
        if self.limit_n < 1:
            raise ConfigError("limit_n must be >= 1")
        if self.min_total_refs < 0:
            raise ConfigError("min_total_refs must be >= 0")
        if not (0.0 <= self.min_within_share <= 1.0):
            raise ConfigError("min_within_share must lie in [0, 1]")
        if not (1800 <= self.min_year <= 2100):
            raise ConfigError("min_year outside sane range")
        if not (0.0 <= self.overlap_threshold <= 1.0):
            raise ConfigError("overlap_threshold must lie in [0, 1]")
        if self.pia_min_relations < 0:
            raise ConfigError("pia_min_relations must be >= 0")
        if not (0.0 <= self.pia_max_within_share <= 1.0):
            raise ConfigError("pia_max_within_share must lie in [0, 1]")
        if self.silhouette_scope not in metrics.SILHOUETTE_SCOPES:
            raise ConfigError(
                f"unknown silhouette scope {self.silhouette_scope!r}"
            )
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not self.gammas:
            raise ConfigError("at least one gamma required")
        if any(g <= 0 for g in self.gammas):
            raise ConfigError("gamma values must be positive")
        if len(set(self.gammas)) != len(self.gammas):
            raise ConfigError("duplicate gamma values")
        if not self.approaches:
            raise ConfigError("at least one approach required")
        labels = [a.label for a in self.approaches]
        if len(set(labels)) != len(labels):
            raise ConfigError("duplicate approaches")
        for path, what in ((self.edges, "edges"), (self.pubs, "pubs")):
            if not Path(path).is_file():
                raise ConfigError(f"{what} file not found: {path}")

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["edges"] = Path(self.edges).name
        d["pubs"] = Path(self.pubs).name
        # input identity is carried by the content hashes; volatile paths
        # would break byte-level reproducibility of the manifest
        del d["out_dir"]
        d["approaches"] = [a.label for a in self.approaches]
        d["gammas"] = list(self.gammas)
        return d


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _parse_bool(value: str, key: str) -> bool:
    v = value.strip().lower()
    if v in _BOOL_TRUE:
        return True
    if v in _BOOL_FALSE:
        return False
    raise ConfigError(f"config key {key}: expected a boolean, got {value!r}")


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat key=value file; blank lines and '#' comments ignored."""
    raw: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, value = stripped.split("=", 1)
        raw[key.strip()] = value.strip()
    return raw


def build_config(file_values: dict[str, str], overrides: dict) -> PipelineConfig:
    """Merge config-file values with flag overrides (flags win)."""
    merged = dict(file_values)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value

    def get(key, default=None):
        return merged.get(key, default)

    try:
        for required in ("edges", "pubs", "out"):
            if get(required) is None:
                raise ConfigError(f"missing required setting {required!r}")
        limit_n = int(get("limit_n", 5))
        approaches_raw = get("approaches")
        if approaches_raw is None:
            approaches = default_approaches(limit_n)
        elif isinstance(approaches_raw, (list, tuple)):
            approaches = tuple(Approach.parse(a, limit_n) for a in approaches_raw)
        else:
            approaches = tuple(
                Approach.parse(tok, limit_n)
                for tok in str(approaches_raw).split(",") if tok.strip()
            )
        gammas_raw = get("gammas")
        if gammas_raw is None:
            gammas = DEFAULT_GAMMA_SWEEP
        elif isinstance(gammas_raw, (list, tuple)):
            gammas = tuple(float(g) for g in gammas_raw)
        else:
            gammas = tuple(float(tok) for tok in str(gammas_raw).split(",") if tok.strip())
        has_header = get("has_header", False)
        if isinstance(has_header, str):
            has_header = _parse_bool(has_header, "has_header")
        config = PipelineConfig(
            dataset=str(get("dataset", "dataset")),
            edges=Path(get("edges")),
            pubs=Path(get("pubs")),
            out_dir=Path(get("out")),
            approaches=approaches,
            gammas=gammas,
            seed=int(get("seed", 0)),
            limit_n=limit_n,
            min_total_refs=int(get("min_total_refs", 100)),
            min_within_share=float(get("min_within_share", 0.5)),
            min_year=int(get("min_year", 2019)),
            overlap_threshold=float(get("overlap_threshold", 0.3)),
            pia_min_relations=int(get("pia_min_relations", 20)),
            pia_max_within_share=float(get("pia_max_within_share", 0.10)),
            silhouette_scope=str(get("silhouette_scope", "with-relations")),
            jobs=int(get("jobs", 1)),
            has_header=bool(has_header),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc
    config.validate()
    return config


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def evaluate_clustering(network: CitationNetwork, clustering: Clustering,
                        baseline_set, config: PipelineConfig,
                        approach_label: str, gamma: float
                        ) -> tuple[EvaluationRecord, list[str]]:
    """Compute one EvaluationRecord; returns (record, notes)."""
    notes: list[str] = []
    ari = None
    if baseline_set is not None and len(baseline_set.classes) >= 2:
        try:
            delim = baseline_mod.delimit(clustering, baseline_set)
            if delim.baseline.n_clusters() >= 2:
                ari = metrics.adjusted_rand_index(delim.solution, delim.baseline)
            else:
                notes.append(
                    f"ari missing for {approach_label} gamma={gamma:g}: "
                    "delimitation left fewer than 2 baseline classes"
                )
        except ValueError as exc:
            notes.append(f"ari missing for {approach_label} gamma={gamma:g}: {exc}")
    elif baseline_set is not None:
        notes.append(
            f"ari missing for {approach_label} gamma={gamma:g}: "
            "fewer than 2 baseline classes"
        )
    record = EvaluationRecord(
        dataset=config.dataset,
        approach=approach_label,
        gamma=gamma,
        granularity=metrics.granularity(clustering),
        ari=ari,
        mean_silhouette=metrics.mean_silhouette(
            clustering, network, scope=config.silhouette_scope
        ),
        pia=metrics.pia(
            clustering, network,
            min_relations=config.pia_min_relations,
            max_within_share=config.pia_max_within_share,
        ),
        skewness=metrics.cluster_size_skewness(clustering).value,
        n_clusters=clustering.n_clusters(),
        n_publications=clustering.n_items(),
    )
    return record, notes


def _cell_filename(approach_label: str, gamma: float) -> str:
    return f"clusters_{approach_label}_gamma{gamma:g}.tsv"


def _run_cell(payload):
    """One (approach, gamma) cell; top-level so it can cross process bounds."""
    (network, graph, baseline_set, config, approach_label, gamma, cell_seed,
     out_dir) = payload
    clustering = leiden_cluster(graph, gamma, cell_seed)
    write_clustering(clustering, Path(out_dir) / _cell_filename(approach_label, gamma))
    record, notes = evaluate_clustering(
        network, clustering, baseline_set, config, approach_label, gamma
    )
    return record, notes


@dataclass
class RunResult:
    records: list[EvaluationRecord]
    failures: list[tuple[str, float, str]]  # (approach, gamma, error)
    notes: list[str]
    out_dir: Path

    @property
    def ok(self) -> bool:
        return not self.failures and bool(self.records)


def run_pipeline(config: PipelineConfig) -> RunResult:
    config.validate()
    out_dir = Path(config.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory not writable: {exc}") from exc

    try:
        network = load_network(config.edges, config.pubs, has_header=config.has_header)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"failed to load network: {exc}") from exc
    logger.info("loaded %s", network)

    write_degree_csv(network, config.dataset, out_dir / "degrees.csv")

    baseline_set, sel_log = baseline_mod.build_baseline(
        network,
        min_total_refs=config.min_total_refs,
        min_within_share=config.min_within_share,
        min_year=config.min_year,
        overlap_threshold=config.overlap_threshold,
        seed=config.seed,
    )
    baseline_mod.write_baseline(baseline_set, out_dir / "baseline.tsv")
    notes: list[str] = []
    if len(baseline_set.classes) < 2:
        notes.append("ari unavailable: fewer than 2 baseline classes in dataset")
    with open(out_dir / "baseline_log.json", "w", encoding="utf-8") as fh:
        json.dump({
            "classes_after_disjoin": len(baseline_set.classes),
            "items_after_disjoin": baseline_set.n_items(),
            "selection": dataclasses.asdict(sel_log),
            "seed": config.seed,
        }, fh, indent=2, sort_keys=True)
        fh.write("\n")

    cells = []
    for approach in config.approaches:
        graph = build_weighted_graph(network, approach)
        for idx, gamma in enumerate(config.gammas):
            cell_seed = config.seed ^ idx
            cells.append((network, graph, baseline_set, config, approach.label,
                          gamma, cell_seed, str(out_dir)))

    results: dict[tuple[str, float], EvaluationRecord] = {}
    failures: list[tuple[str, float, str]] = []
    if config.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futs = {
                pool.submit(_run_cell, payload): (payload[4], payload[5])
                for payload in cells
            }
            for fut in concurrent.futures.as_completed(futs):
                label, gamma = futs[fut]
                try:
                    record, cell_notes = fut.result()
                    results[(label, gamma)] = record
                    notes.extend(cell_notes)
                except Exception as exc:
                    failures.append((label, gamma, str(exc)))
                    logger.error("cell %s gamma=%g failed: %s", label, gamma, exc)
    else:
        for payload in cells:
            label, gamma = payload[4], payload[5]
            try:
                record, cell_notes = _run_cell(payload)
                results[(label, gamma)] = record
                notes.extend(cell_notes)
            except Exception as exc:
                failures.append((label, gamma, str(exc)))
                logger.error("cell %s gamma=%g failed: %s", label, gamma, exc)

    records = [
        results[key]
        for key in sorted(results, key=lambda k: (k[0], -k[1]))
    ]
    notes = sorted(set(notes))
    failures.sort(key=lambda f: (f[0], -f[1]))

    with open(out_dir / "results.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(EVALUATION_CSV_HEADER + "\n")
        for rec in records:
            fh.write(evaluation_csv_row(rec) + "\n")

    gq_notes = emit_gq_table(records, out_dir / "results_gq.csv")
    notes = sorted(set(notes) | set(gq_notes))

    errors = {(a, g): err for a, g, err in failures}
    cell_entries = []
    for approach in config.approaches:
        for idx, gamma in enumerate(config.gammas):
            key = (approach.label, gamma)
            entry = {
                "approach": approach.label,
                "gamma": gamma,
                "seed": config.seed ^ idx,
                "status": "ok" if key in results else "failed",
            }
            if key in errors:
                entry["error"] = errors[key]
            cell_entries.append(entry)

    manifest = {
        "dataset": config.dataset,
        "config": config.as_dict(),
        "inputs": {
            "edges": {"file": Path(config.edges).name,
                      "sha256": _sha256_file(Path(config.edges))},
            "pubs": {"file": Path(config.pubs).name,
                     "sha256": _sha256_file(Path(config.pubs))},
        },
        "ingest": dataclasses.asdict(network.stats),
        "baseline_classes": len(baseline_set.classes),
        "cells": cell_entries,
        "notes": notes,
    }
    with open(out_dir / "run_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    return RunResult(records=records, failures=failures, notes=notes, out_dir=out_dir)


def emit_gq_table(records: list[EvaluationRecord], path: str | Path) -> list[str]:
    """Long-format control points for granularity-quality plots.

    One row per (record, measure); rows ordered by (approach, gamma
    descending). Records without an ARI value omit that row; a note is
    returned for each omission."""
    notes: list[str] = []
    ordered = sorted(records, key=lambda r: (r.approach, -r.gamma))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(GQ_CSV_HEADER + "\n")
        for rec in ordered:
            values = {
                "ari": rec.ari,
                "mean_silhouette": rec.mean_silhouette,
                "pia": float(rec.pia),
                "skewness": rec.skewness,
            }
            for measure in GQ_MEASURES:
                value = values[measure]
                if value is None:
                    notes.append(
                        f"gq row omitted (no {measure}): approach={rec.approach}, "
                        f"gamma={rec.gamma:g}"
                    )
                    continue
                fh.write(
                    f"{rec.approach},{rec.gamma:.10g},{rec.granularity:.10g},"
                    f"{measure},{value:.10g}\n"
                )
    return notes
