"""Direct-citation normalization, CPM/Leiden clustering, and evaluation."""

from .network import CitationNetwork, PublicationMeta, degrees, load_network, relation
from .normalize import Approach, WeightedGraph, build_weighted_graph, default_approaches
from .leiden import (
    DEFAULT_GAMMA_SWEEP,
    Clustering,
    cpm_quality,
    leiden_cluster,
    resolution_sweep,
)
from .baseline import (
    BaselineClass,
    BaselineClassSet,
    build_baseline,
    coupling_overlap,
    dedupe_same_topic,
    delimit,
    disjoin_items,
    select_candidates,
)
from .metrics import (
    EvaluationRecord,
    adjusted_rand_index,
    cluster_size_skewness,
    dissimilarity,
    granularity,
    mean_silhouette,
    pia,
    silhouette_width,
)
from .synth import GeneratorParams, PlantedNetwork, add_isolated, generate, hubify
from .pipeline import PipelineConfig, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Approach",
    "BaselineClass",
    "BaselineClassSet",
    "CitationNetwork",
    "Clustering",
    "DEFAULT_GAMMA_SWEEP",
    "EvaluationRecord",
    "GeneratorParams",
    "PipelineConfig",
    "PlantedNetwork",
    "PublicationMeta",
    "WeightedGraph",
    "add_isolated",
    "adjusted_rand_index",
    "build_baseline",
    "build_weighted_graph",
    "cluster_size_skewness",
    "coupling_overlap",
    "cpm_quality",
    "dedupe_same_topic",
    "default_approaches",
    "degrees",
    "delimit",
    "disjoin_items",
    "dissimilarity",
    "generate",
    "granularity",
    "hubify",
    "leiden_cluster",
    "load_network",
    "mean_silhouette",
    "pia",
    "relation",
    "resolution_sweep",
    "run_pipeline",
    "select_candidates",
    "silhouette_width",
]
