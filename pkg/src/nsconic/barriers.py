"""Logarithmically homogeneous self-concordant barrier oracles.

Each oracle answers membership queries for the interior of a proper cone and,
on request, returns the barrier value, gradient, Hessian, and a lower
Cholesky factor of the Hessian at the query point. The solver only ever
talks to cones through this interface, so adding a cone means adding one
oracle class.

Requested order semantics for ``eval(x, order)``:

* 0: membership only
* 1: adds value and gradient
* 2: adds the Hessian
* 3: adds the Hessian's lower Cholesky factor

Points on the cone boundary count as exterior; all membership tests use
strict inequalities. A Hessian whose Cholesky factorization breaks down
numerically is likewise reported as exterior, so callers can treat
``in_interior`` as "all requested quantities are usable".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DimensionMismatch, try_chol

__all__ = [
    "BarrierEval",
    "Barrier",
    "NonnegativeBarrier",
    "SecondOrderBarrier",
    "ExponentialBarrier",
    "PowerBarrier",
    "ProductBarrier",
    "PullbackBarrier",
    "free_embedding",
    "fd_check",
    "FdCheckReport",
    "ExteriorPointError",
]


class ExteriorPointError(ValueError):
    """A point required to be in the cone interior is not."""


@dataclass(frozen=True)
class BarrierEval:
    """Result of a barrier oracle query.

    Fields beyond the requested order are None. When ``in_interior`` is
    False all other fields are None regardless of the requested order.
    """

    in_interior: bool
    value: float | None = None
    gradient: np.ndarray | None = None
    hessian: np.ndarray | None = None
    cholesky: np.ndarray | None = None


EXTERIOR = BarrierEval(in_interior=False)


class Barrier:
    """Base class wiring shape validation and order gating for oracles."""

    dim: int
    nu: float

    def __init__(self, dim: int, nu: float, initial_point=None):
        if dim < 1:
            raise ValueError("cone dimension must be positive")
        self.dim = int(dim)
        self.nu = float(nu)
        self._initial_point = (
            None if initial_point is None else np.asarray(initial_point, float)
        )

    @property
    def initial_point(self) -> np.ndarray | None:
        """A canonical strictly interior point, or None if there is none."""
        if self._initial_point is None:
            return None
        return self._initial_point.copy()

    def eval(self, x, order: int = 3) -> BarrierEval:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise DimensionMismatch(
                f"point has shape {x.shape}, oracle dimension is {self.dim}"
            )
        if not np.isfinite(x).all():
            return EXTERIOR
        return self._evaluate(x, int(order))

    def _evaluate(self, x: np.ndarray, order: int) -> BarrierEval:
        raise NotImplementedError

    def _finish(self, order, value, gradient, hessian=None) -> BarrierEval:
        """Assemble an interior result, factoring the Hessian at order 3."""
        if order < 2:
            return BarrierEval(True, value, gradient)
        chol = None
        if order >= 3:
            chol = try_chol(hessian)
            if chol is None:
                return EXTERIOR
        return BarrierEval(True, value, gradient, hessian, chol)


class NonnegativeBarrier(Barrier):
    """-sum(log(x_i)) on the strictly positive orthant. nu equals dim."""

    def __init__(self, dim: int):
        super().__init__(dim, nu=dim, initial_point=np.ones(dim))

    def _evaluate(self, x, order):
        if x.min() <= 0.0:
            return EXTERIOR
        if order < 1:
            return BarrierEval(True)
        inv = 1.0 / x
        value = -np.log(x).sum()
        gradient = -inv
        if order < 2:
            return BarrierEval(True, value, gradient)
        hessian = np.diag(inv * inv)
        chol = np.diag(inv) if order >= 3 else None
        return BarrierEval(True, value, gradient, hessian, chol)


class SecondOrderBarrier(Barrier):
    """-log(x0^2 - ||x_rest||^2) on the Lorentz cone. nu = 2 for any dim."""

    def __init__(self, dim: int):
        e0 = np.zeros(dim)
        e0[0] = 1.0
        super().__init__(dim, nu=2.0, initial_point=e0)

    def _evaluate(self, x, order):
        jx = x.copy()
        jx[1:] *= -1.0
        residual = float(x @ jx)  # x0^2 - ||rest||^2
        if x[0] <= 0.0 or residual <= 0.0:
            return EXTERIOR
        if order < 1:
            return BarrierEval(True)
        value = -np.log(residual)
        gradient = (-2.0 / residual) * jx
        if order < 2:
            return BarrierEval(True, value, gradient)
        hessian = (4.0 / residual**2) * np.outer(jx, jx)
        d = np.full(self.dim, 2.0 / residual)
        d[0] *= -1.0
        hessian[np.diag_indices(self.dim)] += d
        return self._finish(order, value, gradient, hessian)


class ExponentialBarrier(Barrier):
    """Barrier for the exponential cone closure of {x1 >= x2*exp(x3/x2), x2 > 0}.

    Interior test: x1 > 0, x2 > 0 and x2*log(x1/x2) - x3 > 0. nu = 3.
    """

    def __init__(self):
        super().__init__(3, nu=3.0, initial_point=np.array([2.0, 1.0, 0.0]))

    def _evaluate(self, x, order):
        x1, x2, x3 = x
        if x1 <= 0.0 or x2 <= 0.0:
            return EXTERIOR
        ratio = np.log(x1 / x2)
        residual = x2 * ratio - x3
        if residual <= 0.0:
            return EXTERIOR
        if order < 1:
            return BarrierEval(True)
        value = -np.log(residual) - np.log(x1) - np.log(x2)
        dr = np.array([x2 / x1, ratio - 1.0, -1.0])
        gradient = -dr / residual - np.array([1.0 / x1, 1.0 / x2, 0.0])
        if order < 2:
            return BarrierEval(True, value, gradient)
        d2r = np.array(
            [
                [-x2 / x1**2, 1.0 / x1, 0.0],
                [1.0 / x1, -1.0 / x2, 0.0],
                [0.0, 0.0, 0.0],
            ]
        )
        hessian = (
            np.outer(dr, dr) / residual**2
            - d2r / residual
            + np.diag([1.0 / x1**2, 1.0 / x2**2, 0.0])
        )
        return self._finish(order, value, gradient, hessian)


class PowerBarrier(Barrier):
    """Barrier for the generalized power cone over (x, z).

    The cone is {(x, z) : x >= 0, prod(x_i^weights_i) >= |z|} with positive
    weights summing to one; x occupies the first len(weights) coordinates
    and z the last. nu = len(weights) + 1.
    """

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty 1-D sequence")
        if w.min() <= 0.0 or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")
        n = w.size
        x0 = np.ones(n + 1)
        x0[-1] = 0.0
        super().__init__(n + 1, nu=n + 1.0, initial_point=x0)
        self.weights = w

    def _evaluate(self, v, order):
        w = self.weights
        x = v[:-1]
        z = v[-1]
        if x.min() <= 0.0:
            return EXTERIOR
        logx = np.log(x)
        power = np.exp(2.0 * (w @ logx))  # prod x_i^(2 w_i)
        residual = power - z * z
        if residual <= 0.0:
            return EXTERIOR
        if order < 1:
            return BarrierEval(True)
        value = -np.log(residual) - ((1.0 - w) * logx).sum()
        dp = 2.0 * w * power / x  # gradient of the power product
        gradient = np.empty(self.dim)
        gradient[:-1] = -dp / residual - (1.0 - w) / x
        gradient[-1] = 2.0 * z / residual
        if order < 2:
            return BarrierEval(True, value, gradient)
        hessian = np.empty((self.dim, self.dim))
        hxx = np.outer(dp, dp) * (z * z / (power * residual**2))
        hxx[np.diag_indices(w.size)] += (
            2.0 * w * power / (x * x * residual) + (1.0 - w) / (x * x)
        )
        hessian[:-1, :-1] = hxx
        hxz = -2.0 * z * dp / residual**2
        hessian[:-1, -1] = hxz
        hessian[-1, :-1] = hxz
        hessian[-1, -1] = 2.0 / residual + 4.0 * z * z / residual**2
        return self._finish(order, value, gradient, hessian)


def free_embedding(dim: int) -> SecondOrderBarrier:
    """Oracle for a block of ``dim`` free variables.

    Free variables are handled by prepending one dummy coordinate and
    restricting to a second-order cone one dimension up: the original block
    is recovered as the trailing coordinates, and the dummy stays strictly
    feasible along any bounded sequence. nu = 2 regardless of dim.
    """
    if dim < 1:
        raise ValueError("free block must have positive dimension")
    return SecondOrderBarrier(dim + 1)


class ProductBarrier(Barrier):
    """Direct product of barrier oracles laid out block by block.

    Value adds, gradients concatenate, Hessians and Cholesky factors are
    block diagonal, nu adds. The product point is interior exactly when
    every block is.
    """

    def __init__(self, factors):
        factors = list(factors)
        if not factors:
            raise ValueError("product of zero cones is not allowed")
        dims = [f.dim for f in factors]
        inits = [f.initial_point for f in factors]
        init = None
        if all(p is not None for p in inits):
            init = np.concatenate(inits)
        super().__init__(sum(dims), nu=sum(f.nu for f in factors), initial_point=init)
        self.factors = factors
        self._offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)

    def blocks(self, v: np.ndarray) -> list[np.ndarray]:
        """Split a product-space vector into per-factor blocks."""
        o = self._offsets
        return [v[o[i] : o[i + 1]] for i in range(len(self.factors))]

    def _evaluate(self, x, order):
        evals = []
        for f, xb in zip(self.factors, self.blocks(x)):
            ev = f._evaluate(xb, order)
            if not ev.in_interior:
                return EXTERIOR
            evals.append(ev)
        if order < 1:
            return BarrierEval(True)
        value = sum(ev.value for ev in evals)
        gradient = np.concatenate([ev.gradient for ev in evals])
        if order < 2:
            return BarrierEval(True, value, gradient)
        hessian = np.zeros((self.dim, self.dim))
        chol = np.zeros((self.dim, self.dim)) if order >= 3 else None
        o = self._offsets
        for i, ev in enumerate(evals):
            sl = slice(o[i], o[i + 1])
            hessian[sl, sl] = ev.hessian
            if order >= 3:
                chol[sl, sl] = ev.cholesky
        return BarrierEval(True, value, gradient, hessian, chol)


class PullbackBarrier(Barrier):
    """Barrier for the preimage {x : M x in K} of a cone under a linear map.

    Composition with an injective linear map preserves self-concordance and
    the barrier parameter, so nu equals the inner oracle's. The value is the
    inner barrier at M x, the gradient pulls back through M', and the
    Hessian through M' H M. No canonical interior point exists in general;
    pass ``initial_point`` explicitly if one is known.
    """

    def __init__(self, inner: Barrier, mat, initial_point=None):
        mat = mat.toarray() if hasattr(mat, "toarray") else np.asarray(mat, float)
        if mat.ndim != 2 or mat.shape[0] != inner.dim:
            raise DimensionMismatch(
                f"map has shape {mat.shape}, inner oracle dimension is {inner.dim}"
            )
        super().__init__(mat.shape[1], nu=inner.nu, initial_point=initial_point)
        self.inner = inner
        self.mat = mat
        if initial_point is not None:
            if not self.eval(initial_point, order=0).in_interior:
                raise ExteriorPointError("initial point maps outside the cone interior")

    def _evaluate(self, x, order):
        y = self.mat @ x
        ev = self.inner.eval(y, order if order < 2 else 2)
        if not ev.in_interior:
            return EXTERIOR
        if order < 1:
            return BarrierEval(True)
        gradient = self.mat.T @ ev.gradient
        if order < 2:
            return BarrierEval(True, ev.value, gradient)
        hessian = self.mat.T @ ev.hessian @ self.mat
        return self._finish(order, ev.value, gradient, hessian)


@dataclass(frozen=True)
class FdCheckReport:
    """Finite-difference and identity diagnostics for one oracle query."""

    grad_err: float
    hess_err: float
    grad_identity: float
    hess_identity: float

    def ok(self, tol: float = 1e-5) -> bool:
        return max(self.grad_err, self.hess_err) <= tol


def fd_check(oracle: Barrier, x) -> FdCheckReport:
    """Check oracle derivatives at a strictly interior point.

    Central differences with per-coordinate step h_i = 1e-4 * (1 + |x_i|)
    probe the gradient against the value and the Hessian against the
    gradient. The report also carries the two homogeneity identities
    |x'g + nu| / nu and ||H x + g|| / max(1, ||g||).

    Raises ExteriorPointError if x or any probe point leaves the interior.
    """
    x = np.asarray(x, dtype=np.float64)
    ev = oracle.eval(x, order=2)
    if not ev.in_interior:
        raise ExteriorPointError("fd_check requires a strictly interior point")
    n = oracle.dim
    grad_fd = np.empty(n)
    hess_fd = np.empty((n, n))
    for i in range(n):
        h = 1e-4 * (1.0 + abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        evp = oracle.eval(xp, order=1)
        evm = oracle.eval(xm, order=1)
        if not (evp.in_interior and evm.in_interior):
            raise ExteriorPointError(f"probe along coordinate {i} left the interior")
        grad_fd[i] = (evp.value - evm.value) / (2.0 * h)
        hess_fd[:, i] = (evp.gradient - evm.gradient) / (2.0 * h)
    gnorm = np.linalg.norm(ev.gradient)
    grad_err = np.linalg.norm(grad_fd - ev.gradient) / max(1.0, gnorm)
    hess_err = np.linalg.norm(hess_fd - ev.hessian) / max(1.0, np.linalg.norm(ev.hessian))
    grad_identity = abs(x @ ev.gradient + oracle.nu) / oracle.nu
    hess_identity = np.linalg.norm(ev.hessian @ x + ev.gradient) / max(1.0, gnorm)
    return FdCheckReport(grad_err, hess_err, grad_identity, hess_identity)
