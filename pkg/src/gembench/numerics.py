"""Dense linear-algebra and optimization kernels shared by the embedding methods.

Eigen/SVD factorizations are backed by LAPACK (numpy.linalg) behind the
contracts below; the power iteration and the gradient checker are local
because their iteration caps and error definitions are part of the contract.
All kernels work in double precision and apply deterministic sign
conventions so repeated runs produce identical factors.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .exceptions import BoundsError, NumericError, ValidationError

SYMMETRY_TOL = 1e-10


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValidationError(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix entries must be finite")
    return A


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's largest-magnitude entry is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        i = int(np.argmax(np.abs(out[:, j])))
        if out[i, j] < 0:
            out[:, j] = -out[:, j]
    return out


def sym_eig_smallest(A, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The k smallest eigenpairs of a symmetric matrix.

    Returns (eigenvalues ascending, eigenvectors as n x k columns) with
    orthonormal columns and the largest-magnitude component of each
    eigenvector made positive.
    """
    A = _as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValidationError(f"matrix must be square, got {A.shape}")
    if np.max(np.abs(A - A.T), initial=0.0) > SYMMETRY_TOL:
        raise ValidationError(
            f"matrix is not symmetric within {SYMMETRY_TOL:g}"
        )
    if not 1 <= k <= n:
        raise BoundsError(f"k={k} must be in [1, n={n}]")
    values, vectors = np.linalg.eigh((A + A.T) / 2.0)
    return values[:k].copy(), _fix_signs(vectors[:, :k])


def truncated_svd(A, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rank-k SVD: (U n x k, singular values descending, V m x k)."""
    A = _as_matrix(A)
    if not 1 <= k <= min(A.shape):
        raise BoundsError(f"k={k} must be in [1, min{A.shape}]")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    U, s, V = U[:, :k], s[:k].copy(), Vt[:k].T
    # one shared sign flip per component keeps U s V^T unchanged
    for j in range(k):
        i = int(np.argmax(np.abs(U[:, j])))
        if U[i, j] < 0:
            U[:, j] = -U[:, j]
            V[:, j] = -V[:, j]
    return U, s, V


def spectral_radius(A, max_iter: int = 200, tol: float = 1e-8) -> float:
    """Power-iteration estimate of the largest-magnitude eigenvalue.

    Entries must be non-negative. Uses the norm-growth estimate, which also
    converges when +r and -r are tied (bipartite adjacencies). Returns the
    last iterate if the cap is reached; exact within tol for symmetric A.
    """
    A = _as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValidationError(f"matrix must be square, got {A.shape}")
    if np.any(A < 0):
        raise ValidationError("spectral_radius requires non-negative entries")
    if not A.any():
        return 0.0
    v = np.full(n, 1.0 / np.sqrt(n))
    estimate = 0.0
    for _ in range(max_iter):
        w = A @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0  # v fell in the null space; radius 0 for nilpotent-like A
        previous, estimate = estimate, norm
        v = w / norm
        if abs(estimate - previous) <= tol * max(1.0, estimate):
            break
    return estimate


def finite_diff_grad_check(
    loss: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray], np.ndarray],
    params: np.ndarray,
    epsilon: float = 1e-6,
) -> float:
    """Max relative error between an analytic gradient and central differences.

    Per coordinate: |g_analytic - g_fd| / max(1e-12, |g_analytic| + |g_fd|).
    """
    if not 0.0 < epsilon <= 1e-2:
        raise ValidationError(f"epsilon={epsilon} must be in (0, 1e-2]")
    params = np.asarray(params, dtype=np.float64).ravel()
    g_analytic = np.asarray(grad(params), dtype=np.float64).ravel()
    if g_analytic.shape != params.shape:
        raise ValidationError(
            f"gradient shape {g_analytic.shape} != params shape {params.shape}"
        )
    worst = 0.0
    for i in range(params.size):
        shifted = params.copy()
        shifted[i] = params[i] + epsilon
        up = float(loss(shifted))
        shifted[i] = params[i] - epsilon
        down = float(loss(shifted))
        if not (np.isfinite(up) and np.isfinite(down)):
            raise NumericError(f"loss is non-finite near coordinate {i}")
        g_fd = (up - down) / (2.0 * epsilon)
        denom = max(1e-12, abs(g_analytic[i]) + abs(g_fd))
        worst = max(worst, abs(g_analytic[i] - g_fd) / denom)
    return worst
