import numpy as np
import pytest

from gembench.exceptions import BoundsError, NumericError, ValidationError
from gembench.numerics import (
    finite_diff_grad_check,
    spectral_radius,
    sym_eig_smallest,
    truncated_svd,
)


def jacobi_eigh(A, max_sweeps=100):
    """Independent cyclic-Jacobi eigensolver (oracle; small matrices only)."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt((A**2).sum() - (np.diag(A) ** 2).sum())
        if off < 1e-13:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) < 1e-15:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * A[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(1 + theta * theta))
                if theta == 0:
                    t = 1.0
                c = 1.0 / np.sqrt(1 + t * t)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
                V = V @ J
    order = np.argsort(np.diag(A))
    return np.diag(A)[order], V[:, order]


def normalized_laplacian_k4():
    W = np.ones((4, 4)) - np.eye(4)
    return np.eye(4) - W / 3.0


# -- sym_eig_smallest ---------------------------------------------------------


def test_sym_eig_identity():
    values, vectors = sym_eig_smallest(np.eye(3), 2)
    assert np.allclose(values, [1.0, 1.0])
    assert np.allclose(vectors.T @ vectors, np.eye(2), atol=1e-12)


def test_sym_eig_k4_normalized_laplacian():
    values, _ = sym_eig_smallest(normalized_laplacian_k4(), 4)
    assert np.allclose(values, [0.0, 4 / 3, 4 / 3, 4 / 3], atol=1e-12)


def test_sym_eig_matches_jacobi_oracle():
    rng = np.random.default_rng(3)
    for _ in range(5):
        M = rng.normal(size=(8, 8))
        A = (M + M.T) / 2.0
        oracle_vals, _ = jacobi_eigh(A)
        values, vectors = sym_eig_smallest(A, 8)
        assert np.allclose(values, oracle_vals, atol=1e-8)
        for j in range(8):
            residual = A @ vectors[:, j] - values[j] * vectors[:, j]
            assert np.linalg.norm(residual) <= 1e-8 * np.linalg.norm(A)


def test_sym_eig_orthonormal_and_sign_convention():
    rng = np.random.default_rng(4)
    M = rng.normal(size=(10, 10))
    A = (M + M.T) / 2.0
    _, vectors = sym_eig_smallest(A, 6)
    assert np.allclose(vectors.T @ vectors, np.eye(6), atol=1e-8)
    for j in range(6):
        i = np.argmax(np.abs(vectors[:, j]))
        assert vectors[i, j] > 0


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(ValidationError):
        sym_eig_smallest(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(BoundsError):
        sym_eig_smallest(np.eye(3), 4)


# -- truncated_svd -------------------------------------------------------------


def test_svd_zero_matrix():
    _, s, _ = truncated_svd(np.zeros((4, 3)), 2)
    assert np.allclose(s, 0.0)


def test_svd_rank_one():
    x = np.array([1.0, 2.0, 2.0])
    y = np.array([3.0, 4.0])
    U, s, V = truncated_svd(np.outer(x, y), 1)
    assert s[0] == pytest.approx(np.linalg.norm(x) * np.linalg.norm(y))
    assert np.linalg.norm(np.outer(x, y) - s[0] * np.outer(U[:, 0], V[:, 0])) < 1e-10


def test_svd_full_rank_reconstruction():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(10, 10))
    U, s, V = truncated_svd(A, 10)
    assert np.linalg.norm(A - U @ np.diag(s) @ V.T) <= 1e-8 * np.linalg.norm(A)


def test_svd_eckart_young_against_gram_oracle():
    # best rank-k error is sqrt(sum of discarded eigenvalues of A^T A),
    # with the spectrum taken from the independent Jacobi solver
    rng = np.random.default_rng(6)
    A = rng.normal(size=(7, 5))
    gram_vals, _ = jacobi_eigh(A.T @ A)
    gram_vals = np.maximum(gram_vals, 0.0)
    for k in (1, 2, 4):
        U, s, V = truncated_svd(A, k)
        err = np.linalg.norm(A - U @ np.diag(s) @ V.T)
        best = np.sqrt(gram_vals[: 5 - k].sum())
        assert err == pytest.approx(best, rel=1e-6, abs=1e-9)


def test_svd_error_nonincreasing_in_k():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(9, 6))
    errors = []
    for k in range(1, 7):
        U, s, V = truncated_svd(A, k)
        errors.append(np.linalg.norm(A - U @ np.diag(s) @ V.T))
    assert all(errors[i + 1] <= errors[i] + 1e-12 for i in range(len(errors) - 1))


def test_svd_descending_nonnegative():
    rng = np.random.default_rng(8)
    _, s, _ = truncated_svd(rng.normal(size=(6, 6)), 6)
    assert np.all(s >= 0)
    assert np.all(np.diff(s) <= 1e-12)


# -- spectral_radius -------------------------------------------------------------


def test_spectral_radius_k2():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert spectral_radius(A) == pytest.approx(1.0, abs=1e-8)


def test_spectral_radius_k4():
    A = np.ones((4, 4)) - np.eye(4)
    assert spectral_radius(A) == pytest.approx(3.0, abs=1e-8)


def test_spectral_radius_matches_eig_oracle():
    rng = np.random.default_rng(9)
    for _ in range(5):
        M = np.abs(rng.normal(size=(6, 6)))
        A = (M + M.T) / 2.0
        vals, _ = jacobi_eigh(A)
        assert spectral_radius(A) == pytest.approx(
            max(abs(vals[0]), abs(vals[-1])), rel=1e-6
        )


def test_spectral_radius_scaling():
    rng = np.random.default_rng(10)
    M = np.abs(rng.normal(size=(5, 5)))
    A = (M + M.T) / 2.0
    r = spectral_radius(A)
    for c in (0.5, 2.0, 7.5):
        assert spectral_radius(c * A) == pytest.approx(c * r, rel=1e-6)


def test_spectral_radius_zero_and_negative():
    assert spectral_radius(np.zeros((3, 3))) == 0.0
    with pytest.raises(ValidationError):
        spectral_radius(np.array([[0.0, -1.0], [1.0, 0.0]]))


# -- finite_diff_grad_check --------------------------------------------------------


def test_gradcheck_quadratic():
    loss = lambda x: float(x @ x)
    grad = lambda x: 2.0 * x
    err = finite_diff_grad_check(loss, grad, np.array([1.0, 2.0]), epsilon=1e-6)
    assert err < 1e-8


def test_gradcheck_constant_loss():
    loss = lambda x: 1.0
    grad = lambda x: np.zeros_like(x)
    assert finite_diff_grad_check(loss, grad, np.ones(3), epsilon=1e-5) == 0.0


def test_gradcheck_detects_wrong_gradient():
    loss = lambda x: float(x @ x)
    grad = lambda x: 3.0 * x  # wrong on purpose
    err = finite_diff_grad_check(loss, grad, np.array([1.0, -2.0]), epsilon=1e-6)
    assert err > 0.1


def test_gradcheck_epsilon_bounds():
    loss = lambda x: float(x @ x)
    grad = lambda x: 2.0 * x
    with pytest.raises(ValidationError):
        finite_diff_grad_check(loss, grad, np.ones(2), epsilon=0.5)


def test_gradcheck_nonfinite_loss():
    loss = lambda x: float("nan")
    grad = lambda x: np.zeros_like(x)
    with pytest.raises(NumericError):
        finite_diff_grad_check(loss, grad, np.ones(2), epsilon=1e-5)
