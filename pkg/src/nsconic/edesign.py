"""E-optimal experimental design as a nonsymmetric conic program.

Given p candidate experiments with feature vectors v_1..v_p (columns of an
n x p matrix V), the E-optimal design maximizes the smallest eigenvalue of
the information matrix V diag(x) V' over weight vectors x on the simplex.
As a conic program over variables (t, x):

    min -t   s.t.   sum(x) = 1,   (t, x) in K_E

where K_E = closure{(t, x) : x > 0, V diag(x) V' - t I positive definite}.
K_E admits the barrier -log det(V diag(x) V' - t I) - sum log x_i with
parameter n + p, which is what makes this cone a natural fit for a solver
parameterized by barrier oracles rather than a fixed cone menu.
"""

from __future__ import annotations

import numpy as np

from .barriers import Barrier, BarrierEval, EXTERIOR
from .hsd import ProblemData
from .linalg import SparseMatrix, solve_lower, solve_lower_t, try_chol

__all__ = [
    "EDesignBarrier",
    "build_edesign",
    "random_design_matrix",
    "grid_objective",
    "smallest_eigenvalue",
]


class EDesignBarrier(Barrier):
    """Barrier oracle for the E-design cone over (t, x) in R^(1+p).

    Membership requires x > 0 componentwise and V diag(x) V' - t I to admit
    a Cholesky factorization. nu = n + p (log det contributes n, the orthant
    part p). There is no canonical interior point: it depends on V, so
    build_edesign supplies one.
    """

    def __init__(self, V):
        V = np.asarray(V, dtype=np.float64)
        if V.ndim != 2 or V.size == 0:
            raise ValueError("V must be a nonempty 2-D array")
        if not np.isfinite(V).all():
            raise ValueError("V must be finite")
        n, p = V.shape
        super().__init__(1 + p, nu=float(n + p))
        self.V = V

    def _evaluate(self, v, order):
        V = self.V
        n, p = V.shape
        t = v[0]
        x = v[1:]
        if x.min() <= 0.0:
            return EXTERIOR
        M = (V * x) @ V.T
        M[np.diag_indices(n)] -= t
        LM = try_chol(M)
        if LM is None:
            return EXTERIOR
        if order < 1:
            return BarrierEval(True)
        logx = np.log(x)
        value = -2.0 * np.log(np.diag(LM)).sum() - logx.sum()
        Li = solve_lower(LM, np.eye(n))  # inverse of the factor
        W = solve_lower(LM, V)
        gradient = np.empty(1 + p)
        gradient[0] = (Li * Li).sum()  # trace of M^{-1}
        gradient[1:] = -(W * W).sum(axis=0) - 1.0 / x
        if order < 2:
            return BarrierEval(True, value, gradient)
        S = W.T @ W  # S[i, j] = v_i' M^{-1} v_j
        Minv = Li.T @ Li
        U = solve_lower_t(LM, W)  # M^{-1} V
        hessian = np.empty((1 + p, 1 + p))
        hessian[0, 0] = (Minv * Minv).sum()
        htx = -(U * U).sum(axis=0)
        hessian[0, 1:] = htx
        hessian[1:, 0] = htx
        hxx = S * S
        hxx[np.diag_indices(p)] += 1.0 / (x * x)
        hessian[1:, 1:] = hxx
        return self._finish(order, value, gradient, hessian)


def build_edesign(V):
    """Assemble (problem, barrier, x0) for the E-design of the columns of V.

    The start puts uniform weight on all experiments and takes t at half the
    resulting smallest eigenvalue, which is strictly interior whenever V has
    full row rank.
    """
    barrier = EDesignBarrier(V)
    V = barrier.V
    n, p = V.shape
    A = SparseMatrix(1, 1 + p, np.zeros(p, dtype=int), np.arange(1, 1 + p), np.ones(p))
    b = np.array([1.0])
    c = np.zeros(1 + p)
    c[0] = -1.0
    prob = ProblemData(A, b, c)
    x_uniform = np.full(p, 1.0 / p)
    lam = smallest_eigenvalue((V * x_uniform) @ V.T)
    if lam <= 0.0:
        raise ValueError("V must have full row rank (uniform design is singular)")
    x0 = np.concatenate([[0.5 * lam], x_uniform])
    if not barrier.eval(x0, order=0).in_interior:
        raise ValueError("failed to construct an interior design start")
    return prob, barrier, x0


def random_design_matrix(n: int, p: int | None = None, seed: int = 0) -> np.ndarray:
    """Standard-normal candidate matrix; p defaults to 2n."""
    if p is None:
        p = 2 * n
    if n < 1 or p < n:
        raise ValueError("need p >= n >= 1")
    return np.random.default_rng(seed).standard_normal((n, p))


def smallest_eigenvalue(M) -> float:
    """Smallest eigenvalue of a symmetric matrix (stacked input allowed)."""
    vals = np.linalg.eigvalsh(M)
    return vals[..., 0] if vals.ndim > 1 else float(vals[0])


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def grid_objective(V, resolution: int) -> float:
    """Brute-force E-design objective over the simplex grid x = k/resolution.

    Enumerates every composition of ``resolution`` into p nonnegative parts
    and returns the best smallest eigenvalue, a lower bound on the true
    optimum that converges as the grid refines. Deliberately independent of
    the solver; used as a verification oracle. Guarded to p <= 6 because the
    grid grows as C(resolution + p - 1, p - 1).
    """
    V = np.asarray(V, dtype=np.float64)
    n, p = V.shape
    if p > 6:
        raise ValueError("grid oracle is limited to p <= 6 candidates")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    X = np.array(list(_compositions(resolution, p)), dtype=np.float64) / resolution
    outers = np.einsum("ik,jk->kij", V, V)  # stack of v_k v_k'
    M = np.tensordot(X, outers, axes=(1, 0))
    return float(np.linalg.eigvalsh(M)[:, 0].max())
