"""Undirected weighted simple graphs, edge-list I/O, and structural statistics."""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .exceptions import BoundsError, ParseError, ValidationError

# Domains used to organize benchmark corpora. Arbitrary labels are accepted
# but normalized to "other:<name>" so reports always group on a closed set
# plus explicitly-named extras.
KNOWN_DOMAINS = frozenset(
    {"social", "biology", "economic", "technological", "internet"}
)


def canonical_domain(label: str) -> str:
    """Normalize a domain label; unknown names become "other:<name>"."""
    name = str(label).strip().lower()
    if not name:
        raise ValidationError("domain label must be non-empty")
    if name in KNOWN_DOMAINS or name == "other":
        return name
    if name.startswith("other:") and len(name) > len("other:"):
        return name
    return f"other:{name}"


class Graph:
    """Undirected simple graph with positive edge weights on nodes 0..n-1.

    Immutable after construction; safe to share read-only across workers.
    Adjacency is kept as neighbor lists; a dense symmetric matrix view is
    built lazily and cached (intended scale is at most a few thousand nodes).
    """

    __slots__ = ("n", "_weights", "_adj", "_dense")

    def __init__(self, n: int, edges: Iterable = ()):
        if n < 0:
            raise ValidationError(f"node count must be >= 0, got {n}")
        self.n = int(n)
        weights: dict[tuple[int, int], float] = {}
        if isinstance(edges, Mapping):
            items = [(u, v, w) for (u, v), w in edges.items()]
        else:
            items = [e if len(e) == 3 else (e[0], e[1], 1.0) for e in edges]
        for u, v, w in items:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ValidationError(f"self-loop on node {u} is not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(
                    f"edge ({u},{v}) references a node id >= n={self.n}"
                )
            if not (w > 0.0 and math.isfinite(w)):
                raise ValidationError(
                    f"edge ({u},{v}) has weight {w}; weights must be positive and finite"
                )
            key = (u, v) if u < v else (v, u)
            if key in weights:
                raise ValidationError(f"duplicate edge {key}")
            weights[key] = w
        self._weights = weights
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for (u, v) in weights:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = [sorted(nbrs) for nbrs in adj]
        self._dense = None

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self._weights)

    def edges(self) -> list[tuple[int, int]]:
        """Edge set as canonical (u < v) pairs, sorted lexicographically."""
        return sorted(self._weights)

    def edge_weights(self) -> dict[tuple[int, int], float]:
        return dict(self._weights)

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._weights

    def weight(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        return self._weights[key]

    def neighbors(self, u: int) -> list[int]:
        if not 0 <= u < self.n:
            raise BoundsError(f"node {u} out of range [0,{self.n})")
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._adj], dtype=np.int64)

    def dense_adjacency(self, weighted: bool = True) -> np.ndarray:
        """Dense symmetric |V|x|V| adjacency matrix (copy)."""
        if self._dense is None:
            W = np.zeros((self.n, self.n), dtype=np.float64)
            for (u, v), w in self._weights.items():
                W[u, v] = w
                W[v, u] = w
            self._dense = W
        if weighted:
            return self._dense.copy()
        return (self._dense > 0).astype(np.float64)

    def __reduce__(self):
        # rebuild from (n, weights): keeps pickles small and drops the cache
        return (Graph, (self.n, self._weights))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._weights == other._weights

    __hash__ = None  # mutable-by-convention container semantics

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GraphStats:
    """Structural summary used to organize corpora by domain and density."""

    n: int
    m: int
    density: float
    avg_degree: float
    diameter_lcc: int
    avg_clustering: float
    num_components: int


# -- edge-list files ------------------------------------------------------


def load_edge_list(path, n_hint: int | None = None) -> Graph:
    """Read "u v [w]" lines into a Graph.

    Lines starting with '#' are comments. Duplicate edges collapse to one,
    keeping the last weight (directed inputs are thereby symmetrized).
    Self-loop lines are dropped; a UserWarning reports how many.
    """
    weights: dict[tuple[int, int], float] = {}
    max_id = -1
    self_loops = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) not in (2, 3):
                raise ParseError(
                    f"{path}:{lineno}: expected 'u v [w]', got {line!r}"
                )
            try:
                u, v = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: node ids must be integers, got {line!r}"
                ) from None
            if u < 0 or v < 0:
                raise ParseError(f"{path}:{lineno}: negative node id in {line!r}")
            if len(fields) == 3:
                try:
                    w = float(fields[2])
                except ValueError:
                    raise ParseError(
                        f"{path}:{lineno}: weight must be a number, got {fields[2]!r}"
                    ) from None
            else:
                w = 1.0
            if not (w > 0.0 and math.isfinite(w)):
                raise ValidationError(
                    f"{path}:{lineno}: weight {w} must be positive and finite"
                )
            max_id = max(max_id, u, v)
            if u == v:
                self_loops += 1
                continue
            key = (u, v) if u < v else (v, u)
            weights[key] = w  # last occurrence wins
    if self_loops:
        warnings.warn(
            f"{path}: dropped {self_loops} self-loop line(s)", stacklevel=2
        )
    n = max_id + 1
    if n_hint is not None and n_hint > n:
        n = int(n_hint)
    return Graph(n, weights)


def save_edge_list(graph: Graph, path) -> None:
    """Write one "u v w" line per edge, u < v, sorted lexicographically.

    Round-trips with load_edge_list (integral weights are written without
    a decimal point so unweighted files stay clean).
    """
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for (u, v) in graph.edges():
                w = graph.weight(u, v)
                text = str(int(w)) if float(w).is_integer() else repr(w)
                fh.write(f"{u} {v} {text}\n")
    except OSError as exc:
        raise OSError(f"failed to write edge list to {path}: {exc}") from exc


# -- connectivity and statistics ------------------------------------------


def connected_components(graph: Graph) -> list[list[int]]:
    """Components as sorted node lists, largest first (ties: smallest min id)."""
    seen = [False] * graph.n
    components = []
    for start in range(graph.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        comp = [start]
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        components.append(sorted(comp))
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


def is_connected(graph: Graph) -> bool:
    if graph.n <= 1:
        return True
    return len(connected_components(graph)[0]) == graph.n


def largest_connected_component(graph: Graph) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on the largest component, relabeled 0..k-1.

    Ties between equal-sized components break toward the smallest minimum
    original node id. Returns the subgraph and the original->new id map.
    """
    if graph.n < 1:
        raise ValidationError("graph must have at least one node")
    comp = connected_components(graph)[0]
    id_map = {orig: new for new, orig in enumerate(comp)}
    keep = set(comp)
    edges = {
        (id_map[u], id_map[v]): w
        for (u, v), w in graph.edge_weights().items()
        if u in keep and v in keep
    }
    return Graph(len(comp), edges), id_map


def _bfs_eccentricity(graph: Graph, source: int, targets: set[int]) -> int:
    dist = {source: 0}
    queue = deque([source])
    ecc = 0
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in graph.neighbors(u):
            if v not in dist:
                dist[v] = du + 1
                if v in targets and du + 1 > ecc:
                    ecc = du + 1
                queue.append(v)
    return ecc


def compute_stats(graph: Graph) -> GraphStats:
    """Density, degree, clustering, components, and LCC diameter.

    The diameter is taken over the largest connected component (BFS from
    every component node); clustering is the mean local coefficient with
    degree-<2 nodes contributing 0.
    """
    if graph.n < 1:
        raise ValidationError("graph must have at least one node")
    n, m = graph.n, graph.m
    density = 0.0 if n < 2 else 2.0 * m / (n * (n - 1))
    avg_degree = 2.0 * m / n if n else 0.0

    components = connected_components(graph)
    lcc = set(components[0])
    diameter = 0
    if m >= 1:
        diameter = max(_bfs_eccentricity(graph, v, lcc) for v in lcc)

    neighbor_sets = [set(graph.neighbors(u)) for u in range(n)]
    total = 0.0
    for u in range(n):
        deg = len(neighbor_sets[u])
        if deg < 2:
            continue
        nbrs = graph.neighbors(u)
        links = 0
        for i, a in enumerate(nbrs):
            sa = neighbor_sets[a]
            for b in nbrs[i + 1 :]:
                if b in sa:
                    links += 1
        total += 2.0 * links / (deg * (deg - 1))
    avg_clustering = total / n if n else 0.0

    return GraphStats(
        n=n,
        m=m,
        density=density,
        avg_degree=avg_degree,
        diameter_lcc=diameter,
        avg_clustering=avg_clustering,
        num_components=len(components),
    )
