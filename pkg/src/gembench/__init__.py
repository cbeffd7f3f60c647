"""Graph-embedding link-prediction benchmark toolkit."""

from .evaluation import (
    MAP_MODE_ALL_NODES,
    MAP_MODE_HIDDEN_NODES,
    METRIC_MAP,
    METRIC_P_AT_K,
    GfsReport,
    MetricValue,
    gfs_scores,
    map_score,
    precision_at_k,
    random_baseline,
)
from .embeddings import (
    EMBEDDING_METHODS,
    EmbeddingResult,
    GfParams,
    HopeParams,
    SdneParams,
    embed_graph_factorization,
    embed_hope,
    embed_laplacian_eigenmaps,
    embed_sdne,
    link_score,
    rank_candidates_embedding,
)
from .exceptions import (
    BoundsError,
    CapacityError,
    GembenchError,
    NumericError,
    ParseError,
    ValidationError,
)
from .generators import (
    CorpusPlan,
    GeneratorSpec,
    build_synthetic_corpus,
    generate,
    isrw_sample,
)
from .graph import (
    Graph,
    GraphStats,
    compute_stats,
    largest_connected_component,
    load_edge_list,
    save_edge_list,
)
from .harness import ExperimentConfig, RunRecord, run_experiment
from .heuristics import HEURISTIC_KINDS, heuristic_score, rank_candidates
from .splits import EdgeSplit, split_edges

__version__ = "0.1.0"

__all__ = [
    "BoundsError",
    "CapacityError",
    "CorpusPlan",
    "EMBEDDING_METHODS",
    "EdgeSplit",
    "EmbeddingResult",
    "ExperimentConfig",
    "GembenchError",
    "GeneratorSpec",
    "GfParams",
    "GfsReport",
    "Graph",
    "GraphStats",
    "HEURISTIC_KINDS",
    "HopeParams",
    "MAP_MODE_ALL_NODES",
    "MAP_MODE_HIDDEN_NODES",
    "METRIC_MAP",
    "METRIC_P_AT_K",
    "MetricValue",
    "NumericError",
    "ParseError",
    "RunRecord",
    "SdneParams",
    "ValidationError",
    "build_synthetic_corpus",
    "compute_stats",
    "embed_graph_factorization",
    "embed_hope",
    "embed_laplacian_eigenmaps",
    "embed_sdne",
    "generate",
    "gfs_scores",
    "heuristic_score",
    "isrw_sample",
    "largest_connected_component",
    "link_score",
    "load_edge_list",
    "map_score",
    "precision_at_k",
    "random_baseline",
    "rank_candidates",
    "rank_candidates_embedding",
    "run_experiment",
    "save_edge_list",
    "split_edges",
]
