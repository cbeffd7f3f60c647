"""Hold out edges as link-prediction ground truth and define candidate pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .exceptions import ValidationError
from .graph import Graph, connected_components, save_edge_list

Pair = tuple[int, int]


@dataclass(frozen=True)
class EdgeSplit:
    """A train graph plus the hidden edges every method is scored against.

    Candidate pairs are all unordered non-self pairs absent from the train
    edge set; hidden is always a subset of them. `shortfall` counts hidden
    edges that could not be removed because connectivity preservation
    exempted them.
    """

    train: Graph
    hidden: frozenset[Pair]
    hide_fraction: float
    seed: int
    shortfall: int = 0
    original_m: int = field(default=0)

    @property
    def n(self) -> int:
        return self.train.n

    @property
    def num_candidates(self) -> int:
        return self.n * (self.n - 1) // 2 - self.train.m

    def is_candidate(self, u: int, v: int) -> bool:
        return u != v and not self.train.has_edge(u, v)

    def candidate_pairs(self) -> Iterator[Pair]:
        """All candidate pairs in lexicographic order."""
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if not self.train.has_edge(u, v):
                    yield (u, v)

    def dump(self, train_path, hidden_path) -> None:
        """Write train and hidden edge lists for audit."""
        save_edge_list(self.train, train_path)
        with open(hidden_path, "w", encoding="utf-8") as fh:
            for u, v in sorted(self.hidden):
                fh.write(f"{u} {v} 1\n")


def random_spanning_forest(graph: Graph, rng: np.random.Generator) -> set[Pair]:
    """A uniformly random spanning tree per component (Wilson's algorithm)."""
    in_tree = [False] * graph.n
    tree_edges: set[Pair] = set()
    for comp in connected_components(graph):
        in_tree[comp[0]] = True
        for start in comp:
            if in_tree[start]:
                continue
            # loop-erased random walk; overwriting nxt[] pops cycles
            nxt: dict[int, int] = {}
            u = start
            while not in_tree[u]:
                nbrs = graph.neighbors(u)
                step = nbrs[rng.integers(len(nbrs))]
                nxt[u] = step
                u = step
            u = start
            while not in_tree[u]:
                in_tree[u] = True
                v = nxt[u]
                tree_edges.add((u, v) if u < v else (v, u))
                u = v
    return tree_edges


def split_edges(
    graph: Graph,
    hide_fraction: float,
    seed: int,
    preserve_connectivity: bool = True,
) -> EdgeSplit:
    """Move floor(hide_fraction * m) uniformly random edges into the hidden set.

    With preserve_connectivity, a uniformly random spanning tree (forest on
    disconnected inputs) is exempt from hiding, so every train component
    keeps the connectivity of its source component. If the exemption makes
    the quota unreachable, as many edges as possible are hidden and the
    shortfall is recorded.
    """
    if not 0.0 <= hide_fraction < 1.0:
        raise ValidationError(
            f"hide_fraction must be in [0, 1), got {hide_fraction}"
        )
    if graph.m < 1:
        raise ValidationError("cannot split a graph with no edges")
    rng = np.random.default_rng(seed)
    quota = int(hide_fraction * graph.m)

    exempt: set[Pair] = set()
    if preserve_connectivity:
        exempt = random_spanning_forest(graph, rng)

    eligible = [e for e in graph.edges() if e not in exempt]
    take = min(quota, len(eligible))
    order = rng.permutation(len(eligible))
    hidden = frozenset(eligible[i] for i in order[:take])

    weights = graph.edge_weights()
    train_edges = {e: w for e, w in weights.items() if e not in hidden}
    train = Graph(graph.n, train_edges)
    return EdgeSplit(
        train=train,
        hidden=hidden,
        hide_fraction=hide_fraction,
        seed=seed,
        shortfall=quota - take,
        original_m=graph.m,
    )
