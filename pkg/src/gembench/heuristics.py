"""Non-parametric link-prediction baselines plus the seeded random predictor.

All scores use unweighted neighborhoods of the train graph. The scalar
heuristic_score is the reference definition; rank_candidates runs a
vectorized all-pairs equivalent (dense matrix algebra) and the two are
held equal by tests.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import BoundsError, ValidationError
from .graph import Graph
from .ranking import Pair, rank_candidate_pairs
from .seeding import derive_seed
from .splits import EdgeSplit

PREFERENTIAL_ATTACHMENT = "preferential_attachment"
COMMON_NEIGHBORS = "common_neighbors"
ADAMIC_ADAR = "adamic_adar"
JACCARD_COEFFICIENT = "jaccard_coefficient"
RANDOM_PREDICTOR = "random"

HEURISTIC_KINDS = (
    PREFERENTIAL_ATTACHMENT,
    COMMON_NEIGHBORS,
    ADAMIC_ADAR,
    JACCARD_COEFFICIENT,
    RANDOM_PREDICTOR,
)


def _check_kind(kind: str) -> None:
    if kind not in HEURISTIC_KINDS:
        raise ValidationError(
            f"unknown heuristic {kind!r}; expected one of {HEURISTIC_KINDS}"
        )


def heuristic_score(
    kind: str,
    train: Graph,
    u: int,
    v: int,
    rng: np.random.Generator | None = None,
) -> float:
    """Score one node pair. The random predictor draws the next value
    from the supplied split-scoped generator."""
    _check_kind(kind)
    if not (0 <= u < train.n and 0 <= v < train.n):
        raise BoundsError(f"pair ({u},{v}) out of range for n={train.n}")
    if u == v:
        raise ValidationError("heuristics are defined on distinct node pairs")
    if kind == RANDOM_PREDICTOR:
        if rng is None:
            raise ValidationError("the random predictor needs a seeded generator")
        return float(rng.random())
    if kind == PREFERENTIAL_ATTACHMENT:
        return float(train.degree(u) * train.degree(v))
    nu, nv = set(train.neighbors(u)), set(train.neighbors(v))
    common = nu & nv
    if kind == COMMON_NEIGHBORS:
        return float(len(common))
    if kind == ADAMIC_ADAR:
        # any shared neighbor of a simple graph has degree >= 2, so ln > 0;
        # summed in node order so equal inputs give bit-equal scores
        return float(sum(1.0 / math.log(train.degree(z)) for z in sorted(common)))
    union = len(nu | nv)
    return float(len(common)) / union if union else 0.0


def score_matrix(
    kind: str, train: Graph, seed: int | None = None
) -> np.ndarray:
    """Symmetric all-pairs score matrix (diagonal zero)."""
    _check_kind(kind)
    n = train.n
    if kind == RANDOM_PREDICTOR:
        if seed is None:
            raise ValidationError("the random predictor needs a seed")
        rng = np.random.default_rng(seed)
        S = np.zeros((n, n))
        iu = np.triu_indices(n, k=1)
        draws = rng.random(len(iu[0]))  # lexicographic pair order
        S[iu] = draws
        return S + S.T
    A = train.dense_adjacency(weighted=False)
    deg = A.sum(axis=1)
    if kind == PREFERENTIAL_ATTACHMENT:
        S = np.outer(deg, deg)
    elif kind == COMMON_NEIGHBORS:
        S = A @ A
    elif kind == ADAMIC_ADAR:
        with np.errstate(divide="ignore"):
            inv_log = np.where(deg >= 2, 1.0 / np.log(np.maximum(deg, 2.0)), 0.0)
        S = (A * inv_log) @ A
    else:  # jaccard
        common = A @ A
        union = deg[:, None] + deg[None, :] - common
        with np.errstate(invalid="ignore", divide="ignore"):
            S = np.where(union > 0, common / np.maximum(union, 1.0), 0.0)
    np.fill_diagonal(S, 0.0)
    return S


def rank_candidates(
    kind: str, split: EdgeSplit, top_k: int | None = None
) -> list[tuple[Pair, float]]:
    """All candidate pairs sorted by score descending, ties lexicographic."""
    seed = None
    if kind == RANDOM_PREDICTOR:
        seed = derive_seed(split.seed, "random-predictor")
    return rank_candidate_pairs(
        score_matrix(kind, split.train, seed=seed), split, top_k=top_k
    )
