"""The four embedding methods and the decoders that turn coordinates into
link scores.

Laplacian eigenmaps and the Katz-proximity factorization are closed-form
(via the numerics kernels); the adjacency factorization trains by
stochastic gradient descent over observed edges; the autoencoder trains by
mini-batch gradient descent with hand-derived backprop (validated against
finite differences). Every method is deterministic given (graph, d,
params, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import BoundsError, NumericError, ValidationError
from .graph import Graph, is_connected, largest_connected_component
from .numerics import spectral_radius, sym_eig_smallest, truncated_svd
from .ranking import Pair, rank_candidate_pairs
from .splits import EdgeSplit

LAPLACIAN_EIGENMAPS = "laplacian_eigenmaps"
GRAPH_FACTORIZATION = "graph_factorization"
HOPE = "hope"
SDNE = "sdne"
EMBEDDING_METHODS = (LAPLACIAN_EIGENMAPS, GRAPH_FACTORIZATION, HOPE, SDNE)

DECODER_INNER_PRODUCT = "inner_product"
DECODER_NEG_SQ_DISTANCE = "neg_sq_distance"
DECODER_RECONSTRUCTION = "reconstruction"
DECODERS = (
    DECODER_INNER_PRODUCT,
    DECODER_NEG_SQ_DISTANCE,
    DECODER_RECONSTRUCTION,
)

DIVERGENCE_LIMIT = 1e12
_SGD_CHUNK = 256


@dataclass(frozen=True)
class GfParams:
    """Adjacency-factorization training knobs. The learning rate halves
    every 100 epochs."""

    learning_rate: float = 0.01
    epochs: int = 500
    reg_lambda: float = 1e-4
    init_scale: float | None = None  # None: 0.1 / sqrt(d)

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValidationError("epochs must be >= 1")
        if self.reg_lambda < 0:
            raise ValidationError("reg_lambda must be >= 0")
        if self.init_scale is not None and self.init_scale <= 0:
            raise ValidationError("init_scale must be > 0")


@dataclass(frozen=True)
class HopeParams:
    """Katz decay is beta_factor / spectral_radius(W), keeping the series
    convergent."""

    beta_factor: float = 0.5

    def validate(self) -> None:
        if not 0.0 < self.beta_factor < 1.0:
            raise ValidationError("beta_factor must be in (0, 1)")


@dataclass(frozen=True)
class SdneParams:
    """Autoencoder shape and loss weights.

    alpha scales the neighbor-distance penalty on the embedding layer,
    beta_penalty up-weights reconstruction of observed-edge positions,
    reg_nu is the L2 penalty on weight matrices. Training is full-batch
    for graphs up to full_batch_limit nodes, mini-batch above.
    """

    hidden_layers: tuple[int, ...] = (128,)
    alpha: float = 1e-5
    beta_penalty: float = 5.0
    reg_nu: float = 1e-4
    learning_rate: float = 0.01
    epochs: int = 200
    batch_size: int = 64
    full_batch_limit: int = 1024

    def validate(self) -> None:
        if not self.hidden_layers or any(h < 1 for h in self.hidden_layers):
            raise ValidationError("hidden_layers must be positive")
        if self.alpha < 0 or self.reg_nu < 0:
            raise ValidationError("alpha and reg_nu must be >= 0")
        if self.beta_penalty <= 1:
            raise ValidationError("beta_penalty must be > 1")
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be > 0")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValidationError("epochs and batch_size must be >= 1")


@dataclass
class EmbeddingResult:
    """Per-node coordinates plus how to decode them into link scores."""

    method: str
    decoder: str
    d: int
    coords: np.ndarray
    target_coords: np.ndarray | None = None
    training_log: list[float] | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValidationError(f"unknown decoder {self.decoder!r}")
        if not np.all(np.isfinite(self.coords)):
            raise NumericError(f"{self.method} produced non-finite coordinates")
        if self.target_coords is not None and not np.all(
            np.isfinite(self.target_coords)
        ):
            raise NumericError(f"{self.method} produced non-finite coordinates")


# -- Laplacian eigenmaps ------------------------------------------------------


def normalized_laplacian(graph: Graph) -> np.ndarray:
    """I - D^{-1/2} W D^{-1/2} (requires no isolated nodes)."""
    W = graph.dense_adjacency()
    deg = W.sum(axis=1)
    if np.any(deg <= 0):
        raise ValidationError(
            "normalized Laplacian needs every node to have an edge"
        )
    inv_sqrt = 1.0 / np.sqrt(deg)
    L = np.eye(graph.n) - inv_sqrt[:, None] * W * inv_sqrt[None, :]
    return (L + L.T) / 2.0


def embed_laplacian_eigenmaps(train: Graph, d: int) -> EmbeddingResult:
    """Coordinates from the d smallest non-trivial eigenvectors of the
    normalized Laplacian; scores decode as negative squared distance."""
    if train.n < 2:
        raise ValidationError("laplacian_eigenmaps needs at least 2 nodes")
    if not is_connected(train):
        raise ValidationError(
            "train graph is disconnected; embed its largest connected "
            "component (see embed_laplacian_eigenmaps_on_lcc)"
        )
    if not 1 <= d <= train.n - 1:
        raise BoundsError(f"d={d} must be in [1, n-1={train.n - 1}]")
    values, vectors = sym_eig_smallest(normalized_laplacian(train), d + 1)
    return EmbeddingResult(
        method=LAPLACIAN_EIGENMAPS,
        decoder=DECODER_NEG_SQ_DISTANCE,
        d=d,
        coords=vectors[:, 1:],
        extras={"eigenvalues": values[1:]},
    )


def embed_laplacian_eigenmaps_on_lcc(train: Graph, d: int) -> EmbeddingResult:
    """Harness-facing variant: disconnected graphs embed their largest
    component and all other nodes get the zero vector."""
    if is_connected(train):
        return embed_laplacian_eigenmaps(train, d)
    lcc, id_map = largest_connected_component(train)
    inner = embed_laplacian_eigenmaps(lcc, d)
    coords = np.zeros((train.n, d))
    for orig, new in id_map.items():
        coords[orig] = inner.coords[new]
    extras = dict(inner.extras)
    extras["lcc_size"] = lcc.n
    return EmbeddingResult(
        method=LAPLACIAN_EIGENMAPS,
        decoder=DECODER_NEG_SQ_DISTANCE,
        d=d,
        coords=coords,
        extras=extras,
    )


# -- graph factorization ------------------------------------------------------


def _gf_objective(
    coords: np.ndarray,
    us: np.ndarray,
    vs: np.ndarray,
    ws: np.ndarray,
    reg_lambda: float,
) -> float:
    if us.size:
        fitted = (coords[us] * coords[vs]).sum(axis=1)
        data = 0.5 * float(((ws - fitted) ** 2).sum())
    else:
        data = 0.0
    return data + 0.5 * reg_lambda * float((coords**2).sum())


def embed_graph_factorization(
    train: Graph, d: int, params: GfParams = GfParams(), seed: int = 0
) -> EmbeddingResult:
    """Fit edge weights with inner products by SGD over observed edges.

    Minimizes 0.5 * sum_edges (w_uv - <y_u, y_v>)^2 plus an L2 penalty,
    processing shuffled edge chunks per epoch. The training log holds the
    full objective at initialization and after every epoch.
    """
    params.validate()
    if d < 1:
        raise BoundsError(f"d={d} must be >= 1")
    rng = np.random.default_rng(np.uint64(seed))
    scale = params.init_scale or 0.1 / math.sqrt(d)
    coords = rng.uniform(-scale, scale, size=(train.n, d))

    edges = train.edges()
    us = np.array([e[0] for e in edges], dtype=np.int64)
    vs = np.array([e[1] for e in edges], dtype=np.int64)
    ws = np.array([train.weight(*e) for e in edges])
    m = len(edges)

    log = [_gf_objective(coords, us, vs, ws, params.reg_lambda)]
    if m == 0:
        log.extend([log[0]] * params.epochs)
        return EmbeddingResult(
            method=GRAPH_FACTORIZATION,
            decoder=DECODER_INNER_PRODUCT,
            d=d,
            coords=coords,
            training_log=log,
        )

    for epoch in range(params.epochs):
        lr = params.learning_rate * 0.5 ** (epoch // 100)
        order = rng.permutation(m)
        for start in range(0, m, _SGD_CHUNK):
            idx = order[start : start + _SGD_CHUNK]
            cu, cv = us[idx], vs[idx]
            yu, yv = coords[cu], coords[cv]
            err = ws[idx] - (yu * yv).sum(axis=1)
            coords *= 1.0 - lr * params.reg_lambda * (len(idx) / m)
            np.add.at(coords, cu, lr * err[:, None] * yv)
            np.add.at(coords, cv, lr * err[:, None] * yu)
        objective = _gf_objective(coords, us, vs, ws, params.reg_lambda)
        if not math.isfinite(objective) or objective > DIVERGENCE_LIMIT:
            raise NumericError(
                f"graph_factorization diverged at epoch {epoch} "
                f"(objective={objective:g}); reduce learning_rate"
            )
        log.append(objective)
    return EmbeddingResult(
        method=GRAPH_FACTORIZATION,
        decoder=DECODER_INNER_PRODUCT,
        d=d,
        coords=coords,
        training_log=log,
    )


# -- Katz-proximity factorization (HOPE) --------------------------------------


def katz_proximity(graph: Graph, beta: float) -> np.ndarray:
    """(I - beta W)^-1 beta W: beta-discounted walk counts of all lengths."""
    W = graph.dense_adjacency()
    M = np.eye(graph.n) - beta * W
    try:
        return np.linalg.solve(M, beta * W)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"Katz system is singular at beta={beta}; lower beta_factor"
        ) from exc


def embed_hope(
    train: Graph, d: int, params: HopeParams = HopeParams()
) -> EmbeddingResult:
    """Factorize Katz proximity with a rank-d/2 SVD into source and target
    coordinates; scores decode as symmetrized source-target inner products."""
    params.validate()
    if d < 2:
        raise BoundsError(f"d={d} must be >= 2 (d/2 coordinates per side)")
    k = d // 2
    if k > train.n:
        raise BoundsError(f"d/2={k} exceeds node count {train.n}")
    radius = spectral_radius(train.dense_adjacency())
    if radius == 0.0:
        zero = np.zeros((train.n, k))
        return EmbeddingResult(
            method=HOPE,
            decoder=DECODER_INNER_PRODUCT,
            d=d,
            coords=zero,
            target_coords=zero.copy(),
            extras={"beta": 0.0, "singular_values": np.zeros(k)},
        )
    beta = params.beta_factor / radius
    proximity = katz_proximity(train, beta)
    U, sigma, V = truncated_svd(proximity, k)
    half = np.sqrt(sigma)
    return EmbeddingResult(
        method=HOPE,
        decoder=DECODER_INNER_PRODUCT,
        d=d,
        coords=U * half,
        target_coords=V * half,
        extras={"beta": beta, "singular_values": sigma},
    )


# -- SDNE ----------------------------------------------------------------------


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # exp(-logaddexp(0, -z)) is the overflow-safe logistic
    return np.exp(-np.logaddexp(0.0, -z))


class _SdneNetwork:
    """Sigmoid autoencoder n -> hidden -> d -> hidden -> n with the
    neighbor-distance penalty applied at the embedding layer."""

    def __init__(self, train: Graph, d: int, params: SdneParams, seed: int):
        self.params = params
        self.n = train.n
        self.d = d
        dims = [train.n, *params.hidden_layers, d]
        dims += [*reversed(params.hidden_layers), train.n]
        self.dims = dims
        self.embed_layer = len(params.hidden_layers) + 1  # activation index
        rng = np.random.default_rng(np.uint64(seed))
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(dims, dims[1:]):
            limit = math.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-limit, limit, (fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

        self.X = train.dense_adjacency()
        self.penalty = np.where(self.X > 0, params.beta_penalty, 1.0)
        self.penalty_sq = self.penalty**2
        edges = train.edges()
        self.edge_u = np.array([e[0] for e in edges], dtype=np.int64)
        self.edge_v = np.array([e[1] for e in edges], dtype=np.int64)
        self.edge_w = np.array([train.weight(*e) for e in edges])

    # -- parameter vector (for the gradient check) ------------------------

    def pack(self) -> np.ndarray:
        parts = [w.ravel() for w in self.weights] + [b for b in self.biases]
        return np.concatenate(parts)

    def unpack(self, vector: np.ndarray) -> None:
        offset = 0
        for i, w in enumerate(self.weights):
            self.weights[i] = vector[offset : offset + w.size].reshape(w.shape)
            offset += w.size
        for i, b in enumerate(self.biases):
            self.biases[i] = vector[offset : offset + b.size].copy()
            offset += b.size

    # -- forward / backward ------------------------------------------------

    def _forward(self, X: np.ndarray) -> list[np.ndarray]:
        activations = [X]
        for w, b in zip(self.weights, self.biases):
            activations.append(_sigmoid(activations[-1] @ w + b))
        return activations

    def _batch_edges(self, nodes: np.ndarray):
        if nodes.size == self.n:
            return self.edge_u, self.edge_v, self.edge_w
        local = np.full(self.n, -1, dtype=np.int64)
        local[nodes] = np.arange(nodes.size)
        lu, lv = local[self.edge_u], local[self.edge_v]
        keep = (lu >= 0) & (lv >= 0)
        return lu[keep], lv[keep], self.edge_w[keep]

    def loss_and_grads(self, nodes: np.ndarray):
        """Total loss over a node batch and gradients for every parameter."""
        p = self.params
        X = self.X[nodes]
        activations = self._forward(X)
        out = activations[-1]
        embedding = activations[self.embed_layer]

        eu, ev, ew = self._batch_edges(nodes)
        diff = embedding[eu] - embedding[ev]
        nu_scaled = p.reg_nu * (nodes.size / self.n)

        residual = out - X
        recon = float((residual**2 * self.penalty_sq[nodes]).sum())
        locality = float(p.alpha * (ew * (diff**2).sum(axis=1)).sum())
        reg = nu_scaled * sum(float((w**2).sum()) for w in self.weights)
        loss = recon + locality + reg

        grad_w = [None] * len(self.weights)
        grad_b = [None] * len(self.biases)
        delta = 2.0 * residual * self.penalty_sq[nodes]
        for layer in range(len(self.weights) - 1, -1, -1):
            a_out = activations[layer + 1]
            dz = delta * (a_out * (1.0 - a_out))
            grad_w[layer] = activations[layer].T @ dz + 2.0 * nu_scaled * self.weights[layer]
            grad_b[layer] = dz.sum(axis=0)
            if layer == 0:
                break  # nothing propagates past the input
            delta = dz @ self.weights[layer].T
            if layer == self.embed_layer:  # inject the locality gradient
                contrib = 2.0 * p.alpha * ew[:, None] * diff
                np.add.at(delta, eu, contrib)
                np.add.at(delta, ev, -contrib)
        return loss, grad_w, grad_b

    def full_loss(self) -> float:
        return self.loss_and_grads(np.arange(self.n))[0]

    def apply_gradients(self, grad_w, grad_b, lr: float, batch: int) -> None:
        step = lr / batch
        for i in range(len(self.weights)):
            self.weights[i] = self.weights[i] - step * grad_w[i]
            self.biases[i] = self.biases[i] - step * grad_b[i]

    def reconstruction(self) -> np.ndarray:
        return self._forward(self.X)[-1]

    def embedding(self) -> np.ndarray:
        return self._forward(self.X)[self.embed_layer]


def embed_sdne(
    train: Graph, d: int, params: SdneParams = SdneParams(), seed: int = 0
) -> EmbeddingResult:
    """Train the autoencoder; scores decode as symmetrized reconstruction.

    The loss combines penalty-weighted adjacency-row reconstruction, the
    neighbor-distance term on embeddings, and L2 weight decay; gradients
    are analytic backprop, checked against finite differences in tests.
    """
    params.validate()
    if d < 1:
        raise BoundsError(f"d={d} must be >= 1")
    if train.n < d:
        raise ValidationError(f"n={train.n} must be >= d={d}")
    if d > min(params.hidden_layers):
        raise ValidationError(
            f"d={d} exceeds the smallest hidden layer "
            f"{min(params.hidden_layers)}"
        )
    net = _SdneNetwork(train, d, params, seed)
    rng = np.random.default_rng(np.uint64(seed) + 1)
    full_batch = train.n <= params.full_batch_limit
    all_nodes = np.arange(train.n)

    def check(loss: float, epoch: int) -> float:
        if not math.isfinite(loss) or loss > DIVERGENCE_LIMIT:
            raise NumericError(
                f"sdne diverged at epoch {epoch} (loss={loss:g}); "
                "reduce learning_rate"
            )
        return loss

    log = []
    if full_batch:
        # the gradient pass already evaluates the pre-update loss, so the
        # per-epoch log costs no extra forward pass
        for epoch in range(params.epochs):
            loss, grad_w, grad_b = net.loss_and_grads(all_nodes)
            log.append(check(loss, epoch))
            net.apply_gradients(grad_w, grad_b, params.learning_rate, train.n)
        log.append(check(net.full_loss(), params.epochs))
    else:
        log.append(net.full_loss())
        for epoch in range(params.epochs):
            order = rng.permutation(train.n)
            for i in range(0, train.n, params.batch_size):
                nodes = order[i : i + params.batch_size]
                _, grad_w, grad_b = net.loss_and_grads(nodes)
                net.apply_gradients(
                    grad_w, grad_b, params.learning_rate, nodes.size
                )
            log.append(check(net.full_loss(), epoch))

    return EmbeddingResult(
        method=SDNE,
        decoder=DECODER_RECONSTRUCTION,
        d=d,
        coords=net.embedding(),
        training_log=log,
        extras={"reconstruction": net.reconstruction()},
    )


def sdne_gradient_functions(
    train: Graph, d: int, params: SdneParams = SdneParams(), seed: int = 0
) -> tuple[Callable[[np.ndarray], float], Callable[[np.ndarray], np.ndarray], np.ndarray]:
    """(loss, gradient, initial parameter vector) closures over the full
    batch, for finite-difference validation of the backprop."""
    params.validate()
    net = _SdneNetwork(train, d, params, seed)
    nodes = np.arange(train.n)

    def loss_fn(vector: np.ndarray) -> float:
        net.unpack(vector)
        return net.loss_and_grads(nodes)[0]

    def grad_fn(vector: np.ndarray) -> np.ndarray:
        net.unpack(vector)
        _, grad_w, grad_b = net.loss_and_grads(nodes)
        parts = [g.ravel() for g in grad_w] + list(grad_b)
        return np.concatenate(parts)

    return loss_fn, grad_fn, net.pack()


# -- decoding -----------------------------------------------------------------


def link_score(result: EmbeddingResult, u: int, v: int) -> float:
    """Symmetric link score of one pair under the result's decoder."""
    n = result.coords.shape[0]
    if not (0 <= u < n and 0 <= v < n):
        raise BoundsError(f"pair ({u},{v}) out of range for n={n}")
    if u == v:
        raise ValidationError("link scores are defined on distinct pairs")
    if result.decoder == DECODER_INNER_PRODUCT:
        if result.target_coords is not None:
            forward = float(result.coords[u] @ result.target_coords[v])
            backward = float(result.coords[v] @ result.target_coords[u])
            return (forward + backward) / 2.0
        return float(result.coords[u] @ result.coords[v])
    if result.decoder == DECODER_NEG_SQ_DISTANCE:
        delta = result.coords[u] - result.coords[v]
        return -float(delta @ delta)
    recon = result.extras["reconstruction"]
    return (float(recon[u, v]) + float(recon[v, u])) / 2.0


def score_matrix(result: EmbeddingResult) -> np.ndarray:
    """All-pairs symmetric score matrix under the result's decoder."""
    Y = result.coords
    if result.decoder == DECODER_INNER_PRODUCT:
        if result.target_coords is not None:
            S = Y @ result.target_coords.T
            S = (S + S.T) / 2.0
        else:
            S = Y @ Y.T
    elif result.decoder == DECODER_NEG_SQ_DISTANCE:
        sq = (Y**2).sum(axis=1)
        S = -(sq[:, None] + sq[None, :] - 2.0 * (Y @ Y.T))
    else:
        recon = result.extras["reconstruction"]
        S = (recon + recon.T) / 2.0
    S = np.asarray(S, dtype=np.float64).copy()
    np.fill_diagonal(S, 0.0)
    return S


def rank_candidates_embedding(
    result: EmbeddingResult, split: EdgeSplit, top_k: int | None = None
) -> list[tuple[Pair, float]]:
    """Candidate pairs ranked by decoded score; same tie rule as heuristics."""
    return rank_candidate_pairs(score_matrix(result), split, top_k=top_k)


def save_embedding(result: EmbeddingResult, path) -> None:
    """Text dump: header "n d method decoder", then one node row per line
    (source and target coordinates concatenated for two-sided methods)."""
    coords = result.coords
    if result.target_coords is not None:
        coords = np.hstack([coords, result.target_coords])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"{coords.shape[0]} {coords.shape[1]} {result.method} "
            f"{result.decoder}\n"
        )
        for row in coords:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")
