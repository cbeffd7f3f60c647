"""Deterministic candidate-pair ranking shared by heuristics and embeddings.

Ties are always broken by lexicographic order of the canonical (u < v)
pair, so every ranking is reproducible regardless of how scores were
produced or parallelized.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ValidationError
from .splits import EdgeSplit, Pair


def candidate_index_arrays(split: EdgeSplit) -> tuple[np.ndarray, np.ndarray]:
    """(us, vs) arrays of all candidate pairs, u < v, lexicographic order."""
    n = split.n
    us, vs = np.triu_indices(n, k=1)
    if split.train.m:
        train = np.zeros((n, n), dtype=bool)
        for (a, b) in split.train.edges():
            train[a, b] = True
        keep = ~train[us, vs]
        us, vs = us[keep], vs[keep]
    return us, vs


def order_candidates(
    scores: np.ndarray, us: np.ndarray, vs: np.ndarray
) -> np.ndarray:
    """Indices sorting candidates by score descending, then pair order."""
    # lexsort uses the last key as primary
    return np.lexsort((vs, us, -scores))


def rank_candidate_pairs(
    score_matrix: np.ndarray, split: EdgeSplit, top_k: int | None = None
) -> list[tuple[Pair, float]]:
    """Rank every candidate pair of the split by a symmetric score matrix."""
    score_matrix = np.asarray(score_matrix, dtype=np.float64)
    n = split.n
    if score_matrix.shape != (n, n):
        raise ValidationError(
            f"score matrix shape {score_matrix.shape} does not match n={n}"
        )
    us, vs = candidate_index_arrays(split)
    scores = score_matrix[us, vs]
    order = order_candidates(scores, us, vs)
    if top_k is not None:
        if top_k < 0:
            raise ValidationError(f"top_k must be >= 0, got {top_k}")
        order = order[:top_k]
    return [
        ((int(us[i]), int(vs[i])), float(scores[i])) for i in order
    ]
