"""Dense and sparse linear-algebra kernels for barrier oracles and Newton systems."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sps
from scipy.linalg import solve_triangular

__all__ = [
    "DimensionMismatch",
    "NotPDError",
    "SparseMatrix",
    "chol_spd",
    "try_chol",
    "solve_lower",
    "solve_lower_t",
]


class DimensionMismatch(ValueError):
    """Operand shapes are inconsistent."""


class NotPDError(ArithmeticError):
    """Matrix is not numerically positive definite."""


class SparseMatrix:
    """Real sparse matrix stored as canonical COO triplets with a CSC view.

    Input triplets may be unsorted and may contain duplicate ``(row, col)``
    pairs; duplicates are summed during canonicalization. Matrix-vector
    products run on the compressed-column view.
    """

    def __init__(self, nrows, ncols, rows, cols, vals):
        if nrows < 0 or ncols < 0:
            raise DimensionMismatch("matrix dimensions must be nonnegative")
        rows = np.atleast_1d(np.asarray(rows, dtype=np.int64))
        cols = np.atleast_1d(np.asarray(cols, dtype=np.int64))
        vals = np.atleast_1d(np.asarray(vals, dtype=np.float64))
        if not (rows.shape == cols.shape == vals.shape) or rows.ndim != 1:
            raise DimensionMismatch("triplet arrays must be 1-D and equally long")
        if rows.size:
            if rows.min() < 0 or rows.max() >= nrows:
                raise DimensionMismatch("row index out of range")
            if cols.min() < 0 or cols.max() >= ncols:
                raise DimensionMismatch("column index out of range")
        if not np.isfinite(vals).all():
            raise ValueError("matrix values must be finite")
        csc = sps.coo_matrix((vals, (rows, cols)), shape=(nrows, ncols)).tocsc()
        csc.sum_duplicates()
        self._csc = csc

    @classmethod
    def from_dense(cls, arr) -> "SparseMatrix":
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch("expected a 2-D array")
        rows, cols = np.nonzero(arr)
        return cls(arr.shape[0], arr.shape[1], rows, cols, arr[rows, cols])

    @property
    def shape(self) -> tuple[int, int]:
        return self._csc.shape

    @property
    def nrows(self) -> int:
        return self._csc.shape[0]

    @property
    def ncols(self) -> int:
        return self._csc.shape[1]

    @property
    def nnz(self) -> int:
        return self._csc.nnz

    def matvec(self, v, transpose: bool = False) -> np.ndarray:
        """Return ``A @ v``, or ``A.T @ v`` when ``transpose`` is set."""
        v = np.asarray(v, dtype=np.float64)
        n_expected = self.nrows if transpose else self.ncols
        if v.shape != (n_expected,):
            raise DimensionMismatch(
                f"operand has shape {v.shape}, expected ({n_expected},)"
            )
        if transpose:
            return self._csc.T @ v
        return self._csc @ v

    def toarray(self) -> np.ndarray:
        return self._csc.toarray()

    def triplets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Canonical (rows, cols, vals) with duplicates already summed."""
        coo = self._csc.tocoo()
        return coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data.copy()

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def _as_square(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def chol_spd(mat) -> np.ndarray:
    """Lower Cholesky factor L with L @ L.T == mat.

    Only the lower triangle of ``mat`` is referenced. Raises NotPDError when
    the factorization breaks down (a pivot fails to be positive) and
    ValueError on non-finite input.
    """
    a = _as_square(mat)
    if not np.isfinite(a).all():
        raise ValueError("matrix contains non-finite entries")
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPDError(str(exc)) from None


def try_chol(mat) -> np.ndarray | None:
    """Like chol_spd, but failure is a value: None when not numerically PD."""
    a = _as_square(mat)
    if not np.isfinite(a).all():
        return None
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        return None


def _check_trsv(fac, rhs):
    L = _as_square(fac)
    b = np.asarray(rhs, dtype=np.float64)
    if b.ndim not in (1, 2) or b.shape[0] != L.shape[0]:
        raise DimensionMismatch(
            f"rhs has shape {b.shape}, incompatible with factor of order {L.shape[0]}"
        )
    return L, b


def solve_lower(fac, rhs) -> np.ndarray:
    """Solve L w = rhs for a lower-triangular L (1-D or 2-D rhs)."""
    L, b = _check_trsv(fac, rhs)
    if L.shape[0] == 0:
        return b.copy()
    return solve_triangular(L, b, lower=True, check_finite=False)


def solve_lower_t(fac, rhs) -> np.ndarray:
    """Solve L.T w = rhs for a lower-triangular L (1-D or 2-D rhs)."""
    L, b = _check_trsv(fac, rhs)
    if L.shape[0] == 0:
        return b.copy()
    return solve_triangular(L, b, lower=True, trans="T", check_finite=False)
