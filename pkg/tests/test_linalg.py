import numpy as np
import pytest

from nsconic.linalg import (
    DimensionMismatch,
    NotPDError,
    SparseMatrix,
    chol_spd,
    solve_lower,
    solve_lower_t,
    try_chol,
)


def test_chol_identity():
    L = chol_spd(np.eye(4))
    np.testing.assert_allclose(L, np.eye(4))


def test_chol_2x2_hand_case():
    M = np.array([[4.0, 2.0], [2.0, 3.0]])
    L = chol_spd(M)
    expected = np.array([[2.0, 0.0], [1.0, np.sqrt(2.0)]])
    np.testing.assert_allclose(L, expected, rtol=1e-15)
    np.testing.assert_allclose(L @ L.T, M, rtol=1e-15)


def test_chol_not_pd_raises():
    M = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3, -1
    with pytest.raises(NotPDError):
        chol_spd(M)
    assert try_chol(M) is None


def test_chol_zero_matrix_not_pd():
    assert try_chol(np.zeros((3, 3))) is None


def test_chol_rejects_nonfinite():
    M = np.eye(2)
    M[0, 1] = M[1, 0] = np.nan
    with pytest.raises(ValueError):
        chol_spd(M)
    assert try_chol(M) is None


def test_chol_rejects_nonsquare():
    with pytest.raises(DimensionMismatch):
        chol_spd(np.ones((2, 3)))


def test_chol_random_spd_reconstruction():
    # L L' must reproduce M to near machine precision on random SPD input.
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(1, 51))
        B = rng.standard_normal((n, n))
        M = B.T @ B + np.eye(n)
        L = chol_spd(M)
        assert np.all(np.triu(L, 1) == 0.0)
        assert np.all(np.diag(L) > 0.0)
        err = np.linalg.norm(L @ L.T - M) / np.linalg.norm(M)
        assert err <= 1e-12


def test_solve_lower_hand_case():
    L = np.array([[2.0, 0.0], [1.0, np.sqrt(2.0)]])
    w = solve_lower(L, np.array([2.0, 4.0]))
    np.testing.assert_allclose(w, [1.0, 3.0 / np.sqrt(2.0)], rtol=1e-15)
    v = solve_lower_t(L, w)
    # L L' v = rhs, i.e. v = M^{-1} rhs for M = [[4,2],[2,3]]
    M = np.array([[4.0, 2.0], [2.0, 3.0]])
    np.testing.assert_allclose(M @ v, [2.0, 4.0], rtol=1e-14)


def test_solve_lower_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_lower(np.eye(3), np.ones(2))


def test_solve_roundtrip_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        B = rng.standard_normal((n, n))
        M = B.T @ B + n * np.eye(n)  # comfortably conditioned
        L = chol_spd(M)
        b = rng.standard_normal(n)
        x = solve_lower_t(L, solve_lower(L, b))
        np.testing.assert_allclose(M @ x, b, rtol=0, atol=1e-8 * np.linalg.norm(b))


def test_solve_lower_matrix_rhs():
    rng = np.random.default_rng(3)
    L = np.tril(rng.standard_normal((5, 5))) + 5 * np.eye(5)
    B = rng.standard_normal((5, 3))
    W = solve_lower(L, B)
    np.testing.assert_allclose(L @ W, B, atol=1e-12)


def test_sparse_duplicates_summed():
    A = SparseMatrix(2, 2, [0, 0, 1], [1, 1, 0], [2.0, 3.0, -1.0])
    assert A.nnz == 2
    np.testing.assert_allclose(A.toarray(), [[0.0, 5.0], [-1.0, 0.0]])


def test_sparse_matvec_hand_case():
    A = SparseMatrix(2, 3, [0, 0, 1], [0, 2, 1], [1.0, 2.0, 3.0])
    np.testing.assert_allclose(A.matvec(np.array([1.0, 1.0, 1.0])), [3.0, 3.0])
    np.testing.assert_allclose(
        A.matvec(np.array([1.0, 2.0]), transpose=True), [1.0, 6.0, 2.0]
    )


def test_sparse_matvec_matches_dense():
    rng = np.random.default_rng(11)
    for _ in range(30):
        m = int(rng.integers(0, 12))
        n = int(rng.integers(0, 12))
        dense = np.where(rng.random((m, n)) < 0.4, rng.standard_normal((m, n)), 0.0)
        A = SparseMatrix.from_dense(dense)
        v = rng.standard_normal(n)
        u = rng.standard_normal(m)
        np.testing.assert_allclose(A.matvec(v), dense @ v, atol=1e-13)
        np.testing.assert_allclose(A.matvec(u, transpose=True), dense.T @ u, atol=1e-13)


def test_sparse_empty_shapes():
    A = SparseMatrix(0, 4, [], [], [])
    assert A.matvec(np.ones(4)).shape == (0,)
    assert A.matvec(np.zeros(0), transpose=True).shape == (4,)


def test_sparse_index_validation():
    with pytest.raises(DimensionMismatch):
        SparseMatrix(2, 2, [2], [0], [1.0])
    with pytest.raises(DimensionMismatch):
        SparseMatrix(2, 2, [0], [-1], [1.0])
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [0], [0], [np.inf])


def test_sparse_matvec_shape_check():
    A = SparseMatrix(2, 3, [0], [0], [1.0])
    with pytest.raises(DimensionMismatch):
        A.matvec(np.ones(2))
    with pytest.raises(DimensionMismatch):
        A.matvec(np.ones(3), transpose=True)


def test_sparse_triplets_roundtrip():
    rng = np.random.default_rng(5)
    dense = np.where(rng.random((6, 9)) < 0.3, rng.standard_normal((6, 9)), 0.0)
    A = SparseMatrix.from_dense(dense)
    r, c, v = A.triplets()
    B = SparseMatrix(6, 9, r, c, v)
    np.testing.assert_array_equal(B.toarray(), A.toarray())
