"""Synthetic graph models, random-walk sampling, and corpus construction.

Ten generator families cover three synthetic domains (social, biology,
internet) plus a Kronecker model attached to every domain. Corpus plans
ask for (size, average degree) combinations; each generator's parameters
are solved so the expected average degree matches the request.

All generators are pure functions of (spec, seed): the same spec always
produces the same graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import ClassVar, Mapping, Sequence

import numpy as np

from .exceptions import BoundsError, CapacityError, ValidationError
from .graph import Graph, canonical_domain
from .seeding import derive_seed

PROB_ATOL = 1e-9
MAX_KRONECKER_ITERATIONS = 13  # dense realization caps at 2^13 nodes


def _check_prob(name: str, value: float) -> None:
    if not -PROB_ATOL <= value <= 1.0 + PROB_ATOL:
        raise ValidationError(f"{name}={value} must lie in [0, 1]")


# -- model parameter types --------------------------------------------------


@dataclass(frozen=True)
class BarabasiAlbert:
    """Preferential attachment: each new node attaches m edges."""

    kind: ClassVar[str] = "barabasi_albert"
    n: int
    m: int

    def validate(self) -> None:
        if not 1 <= self.m < self.n:
            raise ValidationError(
                f"barabasi_albert requires 1 <= m < n, got m={self.m}, n={self.n}"
            )


@dataclass(frozen=True)
class PowerlawCluster:
    """Preferential attachment with a triad-formation step of probability p."""

    kind: ClassVar[str] = "powerlaw_cluster"
    n: int
    m: int
    p: float

    def validate(self) -> None:
        if not 1 <= self.m < self.n:
            raise ValidationError(
                f"powerlaw_cluster requires 1 <= m < n, got m={self.m}, n={self.n}"
            )
        _check_prob("p", self.p)


@dataclass(frozen=True)
class WattsStrogatz:
    """Ring lattice of degree k with probability-p rewiring."""

    kind: ClassVar[str] = "watts_strogatz"
    n: int
    k: int
    p: float

    def validate(self) -> None:
        if self.k % 2 != 0 or not 0 < self.k < self.n:
            raise ValidationError(
                f"watts_strogatz requires even k with 0 < k < n, got k={self.k}, n={self.n}"
            )
        _check_prob("p", self.p)


@dataclass(frozen=True)
class DuplicationDivergence:
    """Duplicate a random node, keep each copied edge with p_retain."""

    kind: ClassVar[str] = "duplication_divergence"
    n: int
    p_retain: float

    def validate(self) -> None:
        if self.n < 2:
            raise ValidationError(
                f"duplication_divergence requires n >= 2, got n={self.n}"
            )
        _check_prob("p_retain", self.p_retain)


@dataclass(frozen=True)
class RandomGeometric:
    """Unit-square points joined when within the given radius."""

    kind: ClassVar[str] = "random_geometric"
    n: int
    radius: float

    def validate(self) -> None:
        if self.radius < 0:
            raise ValidationError(f"radius={self.radius} must be >= 0")


@dataclass(frozen=True)
class Waxman:
    """Distance-decayed random edges between points in a square region.

    Pair (u, v) is connected with probability alpha * exp(-dist/(beta * L))
    where L is the realized maximum pairwise distance, and only when
    dist <= radius (radius None means no cutoff).
    """

    kind: ClassVar[str] = "waxman"
    n: int
    alpha: float
    beta: float
    domain_size: float = 1.0
    radius: float | None = None

    def validate(self) -> None:
        _check_prob("alpha", self.alpha)
        if self.beta <= 0:
            raise ValidationError(f"beta={self.beta} must be > 0")
        if self.domain_size <= 0:
            raise ValidationError(
                f"domain_size={self.domain_size} must be > 0"
            )
        if self.radius is not None and self.radius < 0:
            raise ValidationError(f"radius={self.radius} must be >= 0")


@dataclass(frozen=True)
class StochasticBlockModel:
    """Blocks with dense internal and sparse cross connections."""

    kind: ClassVar[str] = "stochastic_block_model"
    block_sizes: tuple[int, ...]
    p_in: float
    p_out: float

    def validate(self) -> None:
        if not self.block_sizes or any(s < 1 for s in self.block_sizes):
            raise ValidationError(
                f"block_sizes must be positive, got {self.block_sizes}"
            )
        _check_prob("p_in", self.p_in)
        _check_prob("p_out", self.p_out)

    @property
    def n(self) -> int:
        return sum(self.block_sizes)


@dataclass(frozen=True)
class RMat:
    """Recursive-matrix edges over quadrants weighted (a, b, c, d)."""

    kind: ClassVar[str] = "rmat"
    scale: int
    edge_count: int
    a: float
    b: float
    c: float
    d: float

    def validate(self) -> None:
        if self.scale < 1:
            raise ValidationError(f"scale={self.scale} must be >= 1")
        if self.edge_count < 0:
            raise ValidationError(f"edge_count={self.edge_count} must be >= 0")
        for name in ("a", "b", "c", "d"):
            _check_prob(name, getattr(self, name))
        total = self.a + self.b + self.c + self.d
        if abs(total - 1.0) > PROB_ATOL:
            raise ValidationError(
                f"quadrant weights must sum to 1 within {PROB_ATOL:g}, got {total}"
            )

    @property
    def n(self) -> int:
        return 1 << self.scale


@dataclass(frozen=True)
class RandomHyperbolic:
    """Points on a hyperbolic disk joined when within distance `radius`.

    alpha controls the radial density (alpha = 1 is uniform in hyperbolic
    area); larger alpha pushes points toward the rim.
    """

    kind: ClassVar[str] = "random_hyperbolic"
    n: int
    radius: float
    alpha: float = 1.0

    def validate(self) -> None:
        if self.radius <= 0:
            raise ValidationError(f"radius={self.radius} must be > 0")
        if self.alpha <= 0:
            raise ValidationError(f"alpha={self.alpha} must be > 0")


@dataclass(frozen=True)
class StochasticKronecker:
    """Per-cell Bernoulli draws over the k-fold Kronecker power of a 2x2
    probability matrix; OR-symmetrized, self-loops removed."""

    kind: ClassVar[str] = "stochastic_kronecker"
    initiator: tuple[tuple[float, float], tuple[float, float]]
    iterations: int

    def validate(self) -> None:
        if not 1 <= self.iterations <= MAX_KRONECKER_ITERATIONS:
            raise ValidationError(
                f"iterations={self.iterations} must be in "
                f"[1, {MAX_KRONECKER_ITERATIONS}] for dense realization"
            )
        flat = [x for row in self.initiator for x in row]
        if len(flat) != 4:
            raise ValidationError("initiator must be a 2x2 matrix")
        for x in flat:
            _check_prob("initiator entry", x)

    @property
    def n(self) -> int:
        return 1 << self.iterations


GENERATOR_MODELS = {
    cls.kind: cls
    for cls in (
        BarabasiAlbert,
        PowerlawCluster,
        WattsStrogatz,
        DuplicationDivergence,
        RandomGeometric,
        Waxman,
        StochasticBlockModel,
        RMat,
        RandomHyperbolic,
        StochasticKronecker,
    )
}

Model = (
    BarabasiAlbert
    | PowerlawCluster
    | WattsStrogatz
    | DuplicationDivergence
    | RandomGeometric
    | Waxman
    | StochasticBlockModel
    | RMat
    | RandomHyperbolic
    | StochasticKronecker
)


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator model plus the seed that makes it reproducible."""

    model: Model
    seed: int

    def to_dict(self) -> dict:
        payload = {"kind": self.model.kind, "seed": int(self.seed)}
        for f in fields(self.model):
            value = getattr(self.model, f.name)
            if isinstance(value, tuple):
                value = _tuple_to_list(value)
            payload[f.name] = value
        return payload

    @staticmethod
    def from_dict(payload: Mapping) -> "GeneratorSpec":
        data = dict(payload)
        kind = data.pop("kind", None)
        if kind not in GENERATOR_MODELS:
            raise ValidationError(f"unknown generator kind {kind!r}")
        seed = data.pop("seed", 0)
        cls = GENERATOR_MODELS[kind]
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValidationError(
                f"unknown parameter(s) {sorted(unknown)} for generator {kind!r}"
            )
        kwargs = {k: _list_to_tuple(v) for k, v in data.items()}
        return GeneratorSpec(model=cls(**kwargs), seed=int(seed))


def _tuple_to_list(value):
    return [(_tuple_to_list(v) if isinstance(v, tuple) else v) for v in value]


def _list_to_tuple(value):
    if isinstance(value, (list, tuple)):
        return tuple(_list_to_tuple(v) for v in value)
    return value


# -- generation ---------------------------------------------------------------


def generate(spec: GeneratorSpec) -> Graph:
    """Build the graph a spec describes. Deterministic in (model, seed)."""
    spec.model.validate()
    rng = np.random.default_rng(np.uint64(spec.seed))
    builder = _BUILDERS[spec.model.kind]
    return builder(spec.model, rng)


def _pick_preferential(
    rng: np.random.Generator,
    repeated: list[int],
    existing: int,
    exclude: set[int],
) -> int:
    """One attachment target: degree-proportional, uniform while all degrees
    are zero; rejects excluded nodes."""
    while True:
        if repeated:
            candidate = repeated[rng.integers(len(repeated))]
        else:
            candidate = int(rng.integers(existing))
        if candidate not in exclude:
            return candidate


def _gen_barabasi_albert(model: BarabasiAlbert, rng: np.random.Generator) -> Graph:
    n, m = model.n, model.m
    edges = []
    repeated: list[int] = []
    for new in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(_pick_preferential(rng, repeated, new, targets))
        for t in sorted(targets):
            edges.append((new, t))
            repeated.extend((new, t))
    return Graph(n, edges)


def _gen_powerlaw_cluster(model: PowerlawCluster, rng: np.random.Generator) -> Graph:
    n, m, p = model.n, model.m, model.p
    edges = []
    adj: list[list[int]] = [[] for _ in range(n)]
    repeated: list[int] = []

    def link(u: int, v: int) -> None:
        edges.append((u, v))
        adj[u].append(v)
        adj[v].append(u)
        repeated.extend((u, v))

    for new in range(m, n):
        targets: set[int] = set()
        last_pa = _pick_preferential(rng, repeated, new, targets)
        targets.add(last_pa)
        while len(targets) < m:
            if rng.random() < p:
                options = [
                    w for w in adj[last_pa] if w != new and w not in targets
                ]
                if options:
                    targets.add(options[rng.integers(len(options))])
                    continue
            last_pa = _pick_preferential(rng, repeated, new, targets)
            targets.add(last_pa)
        for t in sorted(targets):
            link(new, t)
    return Graph(n, edges)


def _gen_watts_strogatz(model: WattsStrogatz, rng: np.random.Generator) -> Graph:
    n, k, p = model.n, model.k, model.p
    present: set[tuple[int, int]] = set()
    neighbor_count = [0] * n

    def key(u: int, v: int) -> tuple[int, int]:
        return (u, v) if u < v else (v, u)

    for j in range(1, k // 2 + 1):
        for u in range(n):
            present.add(key(u, (u + j) % n))
    neighbor_count = [k] * n

    if p > 0:
        for j in range(1, k // 2 + 1):
            for u in range(n):
                if rng.random() >= p:
                    continue
                v = (u + j) % n
                if neighbor_count[u] >= n - 1:
                    continue  # u already adjacent to everyone else
                while True:
                    w = int(rng.integers(n))
                    if w != u and key(u, w) not in present:
                        break
                present.remove(key(u, v))
                present.add(key(u, w))
                neighbor_count[v] -= 1
                neighbor_count[w] += 1
    return Graph(n, sorted(present))


def _gen_duplication_divergence(
    model: DuplicationDivergence, rng: np.random.Generator
) -> Graph:
    n, p = model.n, model.p_retain
    adj: list[list[int]] = [[] for _ in range(n)]
    adj[0].append(1)
    adj[1].append(0)
    edges = [(0, 1)]
    for new in range(2, n):
        target = int(rng.integers(new))
        for w in adj[target]:
            if rng.random() < p:
                edges.append((new, w))
                adj[new].append(w)
                adj[w].append(new)
    return Graph(n, edges)


def _pairwise_chunked(points: np.ndarray, chunk: int = 1024):
    """Yield (row_offset, distance block) over unordered pairs."""
    n = len(points)
    for start in range(0, n, chunk):
        block = points[start : start + chunk]
        diff = block[:, None, :] - points[None, :, :]
        yield start, np.sqrt((diff**2).sum(axis=2))


def _upper_pairs(start: int, mask: np.ndarray) -> list[tuple[int, int]]:
    """Strictly-upper (u < v) global pairs from a row-block boolean mask."""
    rows, cols = np.nonzero(mask)
    rows = rows + start
    keep = rows < cols
    return list(zip(rows[keep].tolist(), cols[keep].tolist()))


def _gen_random_geometric(
    model: RandomGeometric, rng: np.random.Generator
) -> Graph:
    n = model.n
    points = rng.random((n, 2))
    edges = []
    for start, dist in _pairwise_chunked(points):
        edges.extend(_upper_pairs(start, dist <= model.radius))
    return Graph(n, edges)


def _gen_waxman(model: Waxman, rng: np.random.Generator) -> Graph:
    n = model.n
    points = model.domain_size * rng.random((n, 2))
    cutoff = math.inf if model.radius is None else model.radius
    max_dist = 0.0
    for _, dist in _pairwise_chunked(points):
        if dist.size:
            max_dist = max(max_dist, float(dist.max()))
    scale = model.beta * max(max_dist, 1e-300)
    edges = []
    for start, dist in _pairwise_chunked(points):
        prob = model.alpha * np.exp(-dist / scale)
        draws = rng.random(dist.shape)
        edges.extend(_upper_pairs(start, (draws < prob) & (dist <= cutoff)))
    return Graph(n, edges)


def _sample_distinct(
    rng: np.random.Generator, population: int, count: int
) -> np.ndarray:
    """`count` distinct integers from range(population), any order."""
    if count >= population:
        return np.arange(population)
    if count > population // 3:
        return rng.permutation(population)[:count]
    chosen: set[int] = set()
    while len(chosen) < count:
        need = count - len(chosen)
        chosen.update(int(x) for x in rng.integers(population, size=2 * need))
        while len(chosen) > count:
            chosen.pop()
    return np.fromiter(chosen, dtype=np.int64)


def _gen_sbm(model: StochasticBlockModel, rng: np.random.Generator) -> Graph:
    blocks = []
    offset = 0
    for size in model.block_sizes:
        blocks.append(np.arange(offset, offset + size))
        offset += size
    edges = []
    for i, bi in enumerate(blocks):
        for j in range(i, len(blocks)):
            p = model.p_in if i == j else model.p_out
            if p <= 0:
                continue
            if i == j:
                s = len(bi)
                total = s * (s - 1) // 2
                if total == 0:
                    continue
                count = int(rng.binomial(total, min(p, 1.0)))
                iu, iv = np.triu_indices(s, k=1)
                for t in _sample_distinct(rng, total, count):
                    edges.append((int(bi[iu[t]]), int(bi[iv[t]])))
            else:
                bj = blocks[j]
                total = len(bi) * len(bj)
                count = int(rng.binomial(total, min(p, 1.0)))
                for t in _sample_distinct(rng, total, count):
                    edges.append(
                        (int(bi[t // len(bj)]), int(bj[t % len(bj)]))
                    )
    return Graph(model.n, edges)


def _gen_rmat(model: RMat, rng: np.random.Generator) -> Graph:
    n = model.n
    capacity = n * (n - 1) // 2
    if model.edge_count > capacity:
        raise CapacityError(
            f"rmat cannot place {model.edge_count} distinct edges on "
            f"{n} nodes (max {capacity})"
        )
    cumulative = np.cumsum([model.a, model.b, model.c, model.d])
    chosen: set[tuple[int, int]] = set()
    stalled_batches = 0
    while len(chosen) < model.edge_count:
        batch = max(1024, 2 * (model.edge_count - len(chosen)))
        quadrant = np.searchsorted(
            cumulative, rng.random((batch, model.scale)), side="right"
        )
        quadrant = np.minimum(quadrant, 3)
        weights = 1 << np.arange(model.scale - 1, -1, -1)
        us = ((quadrant >> 1) * weights).sum(axis=1)
        vs = ((quadrant & 1) * weights).sum(axis=1)
        before = len(chosen)
        for u, v in zip(us, vs):
            if u == v:
                continue
            chosen.add((int(u), int(v)) if u < v else (int(v), int(u)))
            if len(chosen) == model.edge_count:
                break
        stalled_batches = stalled_batches + 1 if len(chosen) == before else 0
        if stalled_batches >= 50:
            raise CapacityError(
                f"rmat stalled placing distinct edges ({len(chosen)} of "
                f"{model.edge_count}); quadrant weights leave too few cells"
            )
    return Graph(n, sorted(chosen))


def _hyperbolic_radii(
    rng: np.random.Generator, n: int, radius: float, alpha: float
) -> np.ndarray:
    u = rng.random(n)
    return np.arccosh(1.0 + u * (math.cosh(alpha * radius) - 1.0)) / alpha


def _gen_random_hyperbolic(
    model: RandomHyperbolic, rng: np.random.Generator
) -> Graph:
    n = model.n
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    r = _hyperbolic_radii(rng, n, model.radius, model.alpha)
    edges = _hyperbolic_edges(theta, r, model.radius)
    return Graph(n, edges)


def _hyperbolic_proximity_blocks(
    theta: np.ndarray, r: np.ndarray, radius: float, chunk: int = 1024
):
    """Yield (row offset, boolean block) of pairs within hyperbolic distance."""
    n = len(theta)
    cosh_r, sinh_r = np.cosh(r), np.sinh(r)
    threshold = math.cosh(radius)
    for start in range(0, n, chunk):
        block = slice(start, min(start + chunk, n))
        cosh_d = (
            cosh_r[block, None] * cosh_r[None, :]
            - sinh_r[block, None]
            * sinh_r[None, :]
            * np.cos(theta[block, None] - theta[None, :])
        )
        np.maximum(cosh_d, 1.0, out=cosh_d)
        yield start, cosh_d <= threshold


def _hyperbolic_edges(
    theta: np.ndarray, r: np.ndarray, radius: float
) -> list[tuple[int, int]]:
    edges = []
    for start, mask in _hyperbolic_proximity_blocks(theta, r, radius):
        edges.extend(_upper_pairs(start, mask))
    return edges


def _hyperbolic_pair_count(theta: np.ndarray, r: np.ndarray, radius: float) -> int:
    n = len(theta)
    cols = np.arange(n)[None, :]
    total = 0
    for start, mask in _hyperbolic_proximity_blocks(theta, r, radius):
        rows = np.arange(start, start + mask.shape[0])[:, None]
        total += int(np.count_nonzero(mask & (cols > rows)))
    return total


def _gen_stochastic_kronecker(
    model: StochasticKronecker, rng: np.random.Generator
) -> Graph:
    base = np.array(model.initiator, dtype=np.float64)
    probs = base
    for _ in range(model.iterations - 1):
        probs = np.kron(probs, base)
    n = probs.shape[0]
    draws = rng.random((n, n)) < probs
    sym = draws | draws.T
    np.fill_diagonal(sym, False)
    us, vs = np.nonzero(np.triu(sym, k=1))
    return Graph(n, list(zip(us.tolist(), vs.tolist())))


_BUILDERS = {
    "barabasi_albert": _gen_barabasi_albert,
    "powerlaw_cluster": _gen_powerlaw_cluster,
    "watts_strogatz": _gen_watts_strogatz,
    "duplication_divergence": _gen_duplication_divergence,
    "random_geometric": _gen_random_geometric,
    "waxman": _gen_waxman,
    "stochastic_block_model": _gen_sbm,
    "rmat": _gen_rmat,
    "random_hyperbolic": _gen_random_hyperbolic,
    "stochastic_kronecker": _gen_stochastic_kronecker,
}


# -- random-walk sampling -----------------------------------------------------


def isrw_sample(graph: Graph, target_n: int, seed: int) -> Graph:
    """Induced subgraph on `target_n` nodes collected by random walk.

    The walk restarts at a uniformly random unvisited node whenever it
    stalls (isolated node, exhausted component, or no new node for a
    while). Sampled nodes are relabeled 0..target_n-1 in original order.
    """
    if not 1 <= target_n <= graph.n:
        raise BoundsError(
            f"target_n={target_n} must be in [1, n={graph.n}]"
        )
    rng = np.random.default_rng(np.uint64(seed))
    visited: set[int] = set()
    unvisited = set(range(graph.n))

    def jump() -> int:
        node = sorted(unvisited)[rng.integers(len(unvisited))]
        return node

    current = jump()
    visited.add(current)
    unvisited.discard(current)
    stall_limit = max(100, 10 * target_n)
    stalled = 0
    while len(visited) < target_n:
        nbrs = graph.neighbors(current)
        if not nbrs or stalled >= stall_limit:
            current = jump()
            stalled = 0
        else:
            current = nbrs[rng.integers(len(nbrs))]
        if current in unvisited:
            visited.add(current)
            unvisited.discard(current)
            stalled = 0
        else:
            stalled += 1

    kept = sorted(visited)
    idx = {orig: new for new, orig in enumerate(kept)}
    edges = {
        (idx[u], idx[v]): w
        for (u, v), w in graph.edge_weights().items()
        if u in visited and v in visited
    }
    return Graph(target_n, edges)


# -- corpus plans --------------------------------------------------------------

DEFAULT_DOMAIN_GENERATORS: dict[str, tuple[str, ...]] = {
    "social": ("stochastic_block_model", "random_geometric", "waxman"),
    "biology": (
        "watts_strogatz",
        "duplication_divergence",
        "random_hyperbolic",
    ),
    "internet": ("barabasi_albert", "powerlaw_cluster", "rmat"),
}

# Kronecker initiators are chosen per domain and scaled to the degree
# target: assortative for social, clustered for biology, core-periphery
# for internet. These defaults are this artifact's, not from any source.
KRONECKER_PATTERNS: dict[str, tuple[tuple[float, float], tuple[float, float]]] = {
    "social": ((0.85, 0.55), (0.55, 0.35)),
    "biology": ((0.9, 0.45), (0.45, 0.3)),
    "internet": ((0.95, 0.55), (0.55, 0.15)),
}
DEFAULT_KRONECKER_PATTERN = ((0.9, 0.5), (0.5, 0.25))


@dataclass(frozen=True)
class CorpusPlan:
    """What to generate: sizes x degrees x (domain, generator) pairs."""

    sizes: tuple[int, ...] = (256, 512, 1024)
    degrees: tuple[float, ...] = (3.0, 4.0, 5.0)
    domains: Mapping[str, tuple[str, ...]] = field(
        default_factory=lambda: dict(DEFAULT_DOMAIN_GENERATORS)
    )
    include_kronecker: bool = True
    sbm_blocks: int = 4
    sbm_ratio: float = 10.0
    plc_triangle_p: float = 0.25
    ws_rewire_p: float = 0.1
    waxman_beta: float = 0.25
    hyperbolic_alpha: float = 1.0
    rmat_weights: tuple[float, float, float, float] = (0.57, 0.19, 0.19, 0.05)

    def validate(self) -> None:
        if not self.sizes or any(s < 8 for s in self.sizes):
            raise ValidationError(f"plan sizes must be >= 8, got {self.sizes}")
        if not self.degrees or any(d < 2 for d in self.degrees):
            raise ValidationError(
                f"plan degrees must be >= 2, got {self.degrees}"
            )
        for domain, kinds in self.domains.items():
            for kind in kinds:
                if kind not in GENERATOR_MODELS:
                    raise ValidationError(
                        f"unknown generator {kind!r} in domain {domain!r}"
                    )
        if self.sbm_blocks < 2:
            raise ValidationError("sbm_blocks must be >= 2")
        if self.sbm_ratio <= 1:
            raise ValidationError("sbm_ratio must be > 1")

    @staticmethod
    def from_dict(payload: Mapping) -> "CorpusPlan":
        data = dict(payload)
        if "sizes" in data:
            data["sizes"] = tuple(int(s) for s in data["sizes"])
        if "degrees" in data:
            data["degrees"] = tuple(float(d) for d in data["degrees"])
        if "domains" in data:
            data["domains"] = {
                canonical_domain(k): tuple(v) for k, v in data["domains"].items()
            }
        if "rmat_weights" in data:
            data["rmat_weights"] = tuple(float(x) for x in data["rmat_weights"])
        known = {f.name for f in fields(CorpusPlan)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown plan field(s): {sorted(unknown)}")
        return CorpusPlan(**data)

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "degrees": list(self.degrees),
            "domains": {k: list(v) for k, v in self.domains.items()},
            "include_kronecker": self.include_kronecker,
            "sbm_blocks": self.sbm_blocks,
            "sbm_ratio": self.sbm_ratio,
            "plc_triangle_p": self.plc_triangle_p,
            "ws_rewire_p": self.ws_rewire_p,
            "waxman_beta": self.waxman_beta,
            "hyperbolic_alpha": self.hyperbolic_alpha,
            "rmat_weights": list(self.rmat_weights),
        }


@dataclass(frozen=True)
class CorpusGraph:
    """One generated corpus member with its provenance."""

    name: str
    graph: Graph
    domain: str
    spec: GeneratorSpec


def _bisect_increasing(fn, lo: float, hi: float, target: float, steps: int = 60) -> float:
    for _ in range(steps):
        mid = (lo + hi) / 2.0
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _square_distance_cdf(r: float) -> float:
    """P(dist <= r) for two uniform points in the unit square (r <= 1)."""
    return math.pi * r * r - 8.0 / 3.0 * r**3 + 0.5 * r**4


def _solve_rgg_radius(n: int, degree: float) -> float:
    target = degree / (n - 1)
    if target >= _square_distance_cdf(1.0):
        raise ValidationError(
            f"random_geometric cannot reach average degree {degree} at n={n}"
        )
    return _bisect_increasing(_square_distance_cdf, 0.0, 1.0, target)


def _waxman_decay_integral(beta: float) -> float:
    """E[exp(-dist/(beta*L))] for unit-square points, estimated once."""
    rng = np.random.default_rng(derive_seed(0, "waxman-calibration", repr(beta)))
    a = rng.random((200_000, 2))
    b = rng.random((200_000, 2))
    dist = np.sqrt(((a - b) ** 2).sum(axis=1))
    return float(np.exp(-dist / (beta * math.sqrt(2.0))).mean())


def _solve_waxman_alpha(n: int, degree: float, beta: float) -> float:
    target_p = degree / (n - 1)
    mean_decay = _waxman_decay_integral(beta)
    alpha = target_p / mean_decay
    if alpha > 1.0:
        raise ValidationError(
            f"waxman cannot reach average degree {degree} at n={n} with "
            f"beta={beta} (needs alpha={alpha:.3f} > 1)"
        )
    return alpha


def _solve_dd_retention(n: int, degree: float) -> float:
    def expected_degree(p: float) -> float:
        m = 1.0
        for t in range(2, n):
            m *= 1.0 + 2.0 * p / t
        return 2.0 * m / n

    if expected_degree(1.0) < degree:
        raise ValidationError(
            f"duplication_divergence cannot reach average degree {degree} at n={n}"
        )
    return _bisect_increasing(expected_degree, 0.0, 1.0, degree)


def _solve_hyperbolic_radius(n: int, degree: float, alpha: float) -> float:
    """Disk radius whose expected edge probability hits the degree target.

    Uses common random numbers over three probe point sets (subsampled to
    keep calibration cheap) and bisects on the decreasing degree(R) curve.
    """
    probe_n = min(n, 2048)
    target_p = degree / (n - 1)
    probes = []
    for i in range(3):
        rng = np.random.default_rng(
            derive_seed(0, "hyperbolic-calibration", n, repr(alpha), i)
        )
        probes.append((rng.uniform(0, 2 * math.pi, probe_n), rng.random(probe_n)))

    def edge_fraction(radius: float) -> float:
        total = 0.0
        pairs = probe_n * (probe_n - 1) / 2
        for theta, u in probes:
            r = np.arccosh(1.0 + u * (math.cosh(alpha * radius) - 1.0)) / alpha
            total += _hyperbolic_pair_count(theta, r, radius) / pairs
        return total / len(probes)

    lo, hi = 1e-3, 40.0
    if edge_fraction(hi) > target_p:
        return hi  # even a huge disk stays denser than asked; use it
    if edge_fraction(lo) < target_p:
        raise ValidationError(
            f"random_hyperbolic cannot reach average degree {degree} at n={n}"
        )
    for _ in range(40):
        mid = (lo + hi) / 2.0
        if edge_fraction(mid) > target_p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _kronecker_expected_edges(base: np.ndarray, iterations: int) -> float:
    sigma = float(base.sum())
    diag = float(base[0, 0] + base[1, 1])
    cross = float((base * base.T).sum())
    diag_sq = float(base[0, 0] ** 2 + base[1, 1] ** 2)
    k = iterations
    return (sigma**k - diag**k) - 0.5 * (cross**k - diag_sq**k)


def _solve_kronecker_scale(
    pattern: np.ndarray, iterations: int, target_edges: float
) -> float:
    s_max = 1.0 / float(pattern.max())

    def expected(s: float) -> float:
        return _kronecker_expected_edges(s * pattern, iterations)

    if expected(s_max) < target_edges:
        raise ValidationError(
            f"stochastic_kronecker cannot reach {target_edges:.0f} expected "
            f"edges with {iterations} iterations"
        )
    return _bisect_increasing(expected, 0.0, s_max, target_edges)


def solve_model(
    kind: str, n: int, degree: float, plan: CorpusPlan, domain: str
) -> Model:
    """Parameters for `kind` whose expected average degree matches `degree`."""
    if degree >= n - 1:
        raise ValidationError(
            f"average degree {degree} is unreachable on {n} nodes"
        )
    if kind == "barabasi_albert":
        return BarabasiAlbert(n=n, m=max(1, int(degree // 2)))
    if kind == "powerlaw_cluster":
        return PowerlawCluster(
            n=n, m=max(1, int(degree // 2)), p=plan.plc_triangle_p
        )
    if kind == "watts_strogatz":
        k = max(2, 2 * int(degree // 2))
        if k >= n:
            raise ValidationError(
                f"watts_strogatz cannot use even degree {k} on {n} nodes"
            )
        return WattsStrogatz(n=n, k=k, p=plan.ws_rewire_p)
    if kind == "duplication_divergence":
        return DuplicationDivergence(n=n, p_retain=_solve_dd_retention(n, degree))
    if kind == "random_geometric":
        return RandomGeometric(n=n, radius=_solve_rgg_radius(n, degree))
    if kind == "waxman":
        return Waxman(
            n=n,
            alpha=_solve_waxman_alpha(n, degree, plan.waxman_beta),
            beta=plan.waxman_beta,
        )
    if kind == "stochastic_block_model":
        base = n // plan.sbm_blocks
        if base < 2:
            raise ValidationError(
                f"{plan.sbm_blocks} blocks need at least {2 * plan.sbm_blocks} nodes"
            )
        sizes = [base] * plan.sbm_blocks
        for i in range(n - base * plan.sbm_blocks):
            sizes[i] += 1
        s = n / plan.sbm_blocks
        p_out = degree / ((s - 1) * plan.sbm_ratio + (n - s))
        p_in = plan.sbm_ratio * p_out
        if p_in > 1.0:
            raise ValidationError(
                f"stochastic_block_model cannot reach degree {degree}: "
                f"p_in={p_in:.3f} exceeds 1"
            )
        return StochasticBlockModel(
            block_sizes=tuple(sizes), p_in=p_in, p_out=p_out
        )
    if kind == "rmat":
        scale = round(math.log2(n))
        if 1 << scale != n:
            raise ValidationError(f"rmat requires a power-of-two size, got {n}")
        a, b, c, d = plan.rmat_weights
        return RMat(
            scale=scale, edge_count=round(n * degree / 2), a=a, b=b, c=c, d=d
        )
    if kind == "random_hyperbolic":
        return RandomHyperbolic(
            n=n,
            radius=_solve_hyperbolic_radius(n, degree, plan.hyperbolic_alpha),
            alpha=plan.hyperbolic_alpha,
        )
    if kind == "stochastic_kronecker":
        iterations = round(math.log2(n))
        if 1 << iterations != n:
            raise ValidationError(
                f"stochastic_kronecker requires a power-of-two size, got {n}"
            )
        pattern = np.array(
            KRONECKER_PATTERNS.get(domain, DEFAULT_KRONECKER_PATTERN)
        )
        scale = _solve_kronecker_scale(pattern, iterations, n * degree / 2)
        initiator = tuple(
            tuple(float(x) for x in row) for row in (scale * pattern)
        )
        return StochasticKronecker(initiator=initiator, iterations=iterations)
    raise ValidationError(f"unknown generator kind {kind!r}")


def build_synthetic_corpus(plan: CorpusPlan, seed: int) -> list[CorpusGraph]:
    """Generate the plan's corpus deterministically.

    Every (size, degree, domain, generator) combination yields one graph;
    the Kronecker model joins each domain when enabled. Per-graph seeds
    derive from (seed, graph index).
    """
    plan.validate()
    corpus: list[CorpusGraph] = []
    index = 0
    for size in plan.sizes:
        for degree in plan.degrees:
            for domain in sorted(plan.domains):
                kinds = list(plan.domains[domain])
                if plan.include_kronecker:
                    kinds.append("stochastic_kronecker")
                for kind in kinds:
                    model = solve_model(kind, size, degree, plan, domain)
                    spec = GeneratorSpec(
                        model=model, seed=derive_seed(seed, index)
                    )
                    name = f"{domain}-{kind}-n{size}-deg{_fmt_degree(degree)}"
                    corpus.append(
                        CorpusGraph(
                            name=name,
                            graph=generate(spec),
                            domain=domain,
                            spec=spec,
                        )
                    )
                    index += 1
    return corpus


def _fmt_degree(degree: float) -> str:
    return str(int(degree)) if float(degree).is_integer() else str(degree)
