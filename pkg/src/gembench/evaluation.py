"""Link-prediction metrics and their normalized roll-up scores.

Two metrics: precision at k over the global candidate ranking, and mean
average precision over per-node rankings. Each method's value is divided
by the random predictor's expected value on the same split, then averaged
per graph (micro), per domain, and over domain means (macro).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import ValidationError
from .ranking import Pair, candidate_index_arrays
from .splits import EdgeSplit

METRIC_MAP = "map"
METRIC_P_AT_K = "p_at_k"
METRICS = (METRIC_MAP, METRIC_P_AT_K)

# MAP denominator conventions: "all_nodes" divides by |V| (nodes without
# hidden edges contribute 0); "hidden_nodes" divides by the count of nodes
# with at least one hidden edge.
MAP_MODE_ALL_NODES = "all_nodes"
MAP_MODE_HIDDEN_NODES = "hidden_nodes"
MAP_MODES = (MAP_MODE_ALL_NODES, MAP_MODE_HIDDEN_NODES)

# random baselines never report below this, so ratios stay finite
BASELINE_FLOOR = 1e-9


def precision_at_k(
    ranked_pairs: Sequence[Pair], hidden: Iterable[Pair], k: int
) -> float:
    """Fraction of the top k ranked pairs that are hidden edges.

    If fewer than k pairs are ranked, the missing slots count as misses.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    hidden_set = {_canonical(p) for p in hidden}
    hits = sum(1 for p in list(ranked_pairs)[:k] if _canonical(p) in hidden_set)
    return hits / k


def average_precision(
    ranked_pairs: Sequence[Pair], hidden_for_node: set[Pair]
) -> float:
    """AP of one node's ranking; 0 when no hidden edge is retrieved."""
    hits = 0
    total = 0.0
    for rank, pair in enumerate(ranked_pairs, start=1):
        if _canonical(pair) in hidden_for_node:
            hits += 1
            total += hits / rank
    return total / hits if hits else 0.0


def map_score(
    node_rankings: Sequence[Sequence[Pair]],
    hidden: Iterable[Pair],
    mode: str = MAP_MODE_ALL_NODES,
) -> float:
    """Mean average precision over per-node candidate rankings.

    node_rankings[i] lists pairs incident to node i, best first. In
    "all_nodes" mode the mean is over every node; in "hidden_nodes" mode
    only nodes with at least one hidden edge enter the denominator.
    """
    if mode not in MAP_MODES:
        raise ValidationError(f"unknown MAP mode {mode!r}")
    hidden_set = {_canonical(p) for p in hidden}
    incident: dict[int, set[Pair]] = {}
    for (a, b) in hidden_set:
        incident.setdefault(a, set()).add((a, b))
        incident.setdefault(b, set()).add((a, b))

    total = 0.0
    for node, ranking in enumerate(node_rankings):
        for pair in ranking:
            if node not in pair:
                raise ValidationError(
                    f"ranking for node {node} contains non-incident pair {pair}"
                )
        total += average_precision(
            [_canonical(p) for p in ranking], incident.get(node, set())
        )
    if mode == MAP_MODE_ALL_NODES:
        denom = len(node_rankings)
    else:
        denom = sum(1 for node in incident if node < len(node_rankings))
    return total / denom if denom else 0.0


def _canonical(pair: Sequence[int]) -> Pair:
    u, v = int(pair[0]), int(pair[1])
    return (u, v) if u < v else (v, u)


# -- vectorized split scoring ----------------------------------------------


@dataclass(frozen=True)
class SplitMetrics:
    p_at_k: float
    map_all_nodes: float
    map_hidden_nodes: float

    def map_value(self, mode: str) -> float:
        if mode == MAP_MODE_ALL_NODES:
            return self.map_all_nodes
        if mode == MAP_MODE_HIDDEN_NODES:
            return self.map_hidden_nodes
        raise ValidationError(f"unknown MAP mode {mode!r}")


def split_metrics_from_scores(
    score_matrix: np.ndarray, split: EdgeSplit, k: int
) -> SplitMetrics:
    """P@k and both MAP variants from a symmetric all-pairs score matrix.

    Equivalent to ranking candidates explicitly (same lexicographic tie
    rule), but stays in numpy so sweep-sized graphs score in milliseconds.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    S = np.asarray(score_matrix, dtype=np.float64)
    n = split.n
    if S.shape != (n, n):
        raise ValidationError(f"score matrix shape {S.shape} != ({n},{n})")

    hidden_mask = np.zeros((n, n), dtype=bool)
    for (a, b) in split.hidden:
        hidden_mask[a, b] = True
        hidden_mask[b, a] = True

    # global ranking over candidate pairs
    us, vs = candidate_index_arrays(split)
    order = np.lexsort((vs, us, -S[us, vs]))
    top = order[: min(k, order.size)]
    p_at_k = float(hidden_mask[us[top], vs[top]].sum()) / k

    # per-node rankings; secondary key is canonical pair order
    train_mask = np.zeros((n, n), dtype=bool)
    for (a, b) in split.train.edges():
        train_mask[a, b] = True
        train_mask[b, a] = True
    np.fill_diagonal(train_mask, True)

    cols = np.arange(n)
    ap_sum = 0.0
    covered = 0
    for i in range(n):
        valid = ~train_mask[i]
        js = cols[valid]
        if js.size == 0:
            continue
        pair_key = np.minimum(i, js) * n + np.maximum(i, js)
        ordered = js[np.lexsort((pair_key, -S[i, js]))]
        hits = hidden_mask[i, ordered]
        n_hits = int(hits.sum())
        if n_hits:
            covered += 1
            ranks = np.nonzero(hits)[0] + 1
            ap_sum += float(
                (np.arange(1, n_hits + 1) / ranks).sum()
            ) / n_hits
    return SplitMetrics(
        p_at_k=p_at_k,
        map_all_nodes=ap_sum / n if n else 0.0,
        map_hidden_nodes=ap_sum / covered if covered else 0.0,
    )


def node_rankings_from_scores(
    score_matrix: np.ndarray, split: EdgeSplit
) -> list[list[Pair]]:
    """Explicit per-node rankings (for tests and small graphs)."""
    S = np.asarray(score_matrix, dtype=np.float64)
    n = split.n
    rankings: list[list[Pair]] = []
    cols = np.arange(n)
    for i in range(n):
        valid = np.array(
            [j != i and not split.train.has_edge(i, j) for j in cols]
        )
        js = cols[valid]
        pair_key = np.minimum(i, js) * n + np.maximum(i, js)
        ordered = js[np.lexsort((pair_key, -S[i, js]))] if js.size else js
        rankings.append([_canonical((i, int(j))) for j in ordered])
    return rankings


def random_baseline(
    split: EdgeSplit,
    metric: str,
    k: int = 100,
    trials: int = 10,
    seed: int = 0,
    map_mode: str = MAP_MODE_ALL_NODES,
) -> float:
    """Expected metric value of a uniformly random ranking, floored.

    P@k has the closed form |hidden| / |candidates| (every top slot is a
    hit with that probability); MAP is estimated as the mean over `trials`
    random rankings. Results never drop below BASELINE_FLOOR.
    """
    if metric not in METRICS:
        raise ValidationError(f"unknown metric {metric!r}")
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if metric == METRIC_P_AT_K:
        candidates = split.num_candidates
        value = len(split.hidden) / candidates if candidates else 0.0
        return max(value, BASELINE_FLOOR)
    rng = np.random.default_rng(seed)
    n = split.n
    iu = np.triu_indices(n, k=1)
    values = []
    for _ in range(trials):
        S = np.zeros((n, n))
        S[iu] = rng.random(len(iu[0]))
        S = S + S.T
        values.append(
            split_metrics_from_scores(S, split, k=k).map_value(map_mode)
        )
    return max(float(np.mean(values)), BASELINE_FLOOR)


# -- GFS aggregation --------------------------------------------------------


@dataclass(frozen=True)
class MetricValue:
    """One measured metric for one (graph, method, trial)."""

    graph_id: str
    method: str
    metric: str
    value: float
    trial: int = 0
    k: int | None = None
    dimension: int | None = None


@dataclass(frozen=True)
class GfsEntry:
    """GFS scores of one (method, metric): per graph, per domain, overall."""

    micro: float
    macro: float
    per_domain: dict[str, float]
    per_graph: dict[str, float]


@dataclass(frozen=True)
class GfsReport:
    entries: dict[tuple[str, str], GfsEntry] = field(default_factory=dict)
    domain_counts: dict[str, int] = field(default_factory=dict)

    def entry(self, method: str, metric: str) -> GfsEntry:
        return self.entries[(method, metric)]


def gfs_scores(
    rows: Iterable[MetricValue],
    baseline_rows: Iterable[MetricValue],
    domains: Mapping[str, str],
) -> GfsReport:
    """Normalize each row by its split's random baseline and aggregate.

    Per graph: value / baseline, averaged over trials. Micro averages the
    ratios over all graphs; per-domain averages within a domain; macro
    averages the per-domain scores.
    """
    baselines: dict[tuple[str, str, int], float] = {}
    for row in baseline_rows:
        baselines[(row.graph_id, row.metric, row.trial)] = row.value

    by_method: dict[tuple[str, str], dict[str, list[float]]] = {}
    for row in rows:
        key = (row.graph_id, row.metric, row.trial)
        if key not in baselines:
            raise ValidationError(
                f"no random baseline for graph {row.graph_id!r} metric "
                f"{row.metric!r} trial {row.trial}"
            )
        if row.graph_id not in domains:
            raise ValidationError(f"no domain label for graph {row.graph_id!r}")
        ratio = row.value / max(baselines[key], BASELINE_FLOOR)
        by_method.setdefault((row.method, row.metric), {}).setdefault(
            row.graph_id, []
        ).append(ratio)

    entries: dict[tuple[str, str], GfsEntry] = {}
    graph_ids_seen: set[str] = set()
    for (method, metric), per_graph_trials in sorted(by_method.items()):
        per_graph = {
            gid: float(np.mean(ratios))
            for gid, ratios in sorted(per_graph_trials.items())
        }
        graph_ids_seen.update(per_graph)
        by_domain: dict[str, list[float]] = {}
        for gid, ratio in per_graph.items():
            by_domain.setdefault(domains[gid], []).append(ratio)
        per_domain = {
            dom: float(np.mean(vals)) for dom, vals in sorted(by_domain.items())
        }
        entries[(method, metric)] = GfsEntry(
            micro=float(np.mean(list(per_graph.values()))),
            macro=float(np.mean(list(per_domain.values()))),
            per_domain=per_domain,
            per_graph=per_graph,
        )

    domain_counts: dict[str, int] = {}
    for gid in sorted(graph_ids_seen):
        dom = domains[gid]
        domain_counts[dom] = domain_counts.get(dom, 0) + 1
    return GfsReport(entries=entries, domain_counts=domain_counts)
