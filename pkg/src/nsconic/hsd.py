"""Homogeneous self-dual embedding: iterates, residuals, proximity, Newton step.

The solver works on the self-dual embedding of the conic pair

    min c'x  s.t.  Ax = b, x in K        max b'y  s.t.  A'y + s = c, s in K*

whose iterate z = (y, x, tau, s, kappa) lives in R^m x K x R+ x K* x R+.
The embedding operator is never materialized; all products are formed from
A directly. Newton systems are reduced to one positive-definite system of
order m plus a scalar bordering for the tau column, reusing the barrier
oracle's Cholesky factor of H(x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barriers import BarrierEval
from .linalg import DimensionMismatch, SparseMatrix, solve_lower, solve_lower_t, try_chol

__all__ = [
    "ProblemData",
    "Iterate",
    "Residuals",
    "NewtonRhs",
    "Direction",
    "SingularSystemError",
    "residuals",
    "gap",
    "centrality_residual",
    "proximity",
    "newton_solve",
]


class SingularSystemError(ArithmeticError):
    """The reduced Newton system is numerically singular.

    Usually means A has (nearly) dependent rows; presolving redundant
    equalities away is the standard fix.
    """


@dataclass
class ProblemData:
    """Conic program data min c'x s.t. Ax = b, x in K. A must have full row rank."""

    A: SparseMatrix
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        if not isinstance(self.A, SparseMatrix):
            self.A = SparseMatrix.from_dense(np.asarray(self.A, dtype=np.float64))
        self.b = np.asarray(self.b, dtype=np.float64).ravel()
        self.c = np.asarray(self.c, dtype=np.float64).ravel()
        m, n = self.A.shape
        if self.b.shape != (m,) or self.c.shape != (n,):
            raise DimensionMismatch(
                f"A is {m}x{n} but b has shape {self.b.shape}, c {self.c.shape}"
            )
        if not (np.isfinite(self.b).all() and np.isfinite(self.c).all()):
            raise ValueError("problem data must be finite")

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class Iterate:
    """Embedding iterate (y, x, tau, s, kappa); tau and kappa stay positive."""

    y: np.ndarray
    x: np.ndarray
    tau: float
    s: np.ndarray
    kappa: float

    def step(self, d: "Direction", alpha: float) -> "Iterate":
        return Iterate(
            self.y + alpha * d.dy,
            self.x + alpha * d.dx,
            self.tau + alpha * d.dtau,
            self.s + alpha * d.ds,
            self.kappa + alpha * d.dkappa,
        )


@dataclass(frozen=True)
class Residuals:
    """Embedding residuals: primal Ax - b tau, dual -A'y + c tau - s, gap b'y - c'x - kappa."""

    primal: np.ndarray
    dual: np.ndarray
    gap: float

    def norm(self) -> float:
        return float(
            np.sqrt(
                self.primal @ self.primal + self.dual @ self.dual + self.gap**2
            )
        )


def residuals(z: Iterate, prob: ProblemData) -> Residuals:
    rp = prob.A.matvec(z.x) - prob.b * z.tau
    rd = -prob.A.matvec(z.y, transpose=True) + prob.c * z.tau - z.s
    rg = float(prob.b @ z.y - prob.c @ z.x - z.kappa)
    return Residuals(rp, rd, rg)


def gap(z: Iterate, nu: float) -> float:
    """Complementarity gap mu(z) = (x's + tau kappa) / (nu + 1)."""
    return float((z.x @ z.s + z.tau * z.kappa) / (nu + 1.0))


def centrality_residual(z: Iterate, t: float, gradient: np.ndarray):
    """psi(z, t) = (s + t grad f(x), kappa - t / tau); zero exactly on the central path."""
    return z.s + t * gradient, z.kappa - t / z.tau


def proximity(z: Iterate, ev: BarrierEval, nu: float) -> float:
    """Distance of z from the central path in the local Hessian norm, over mu.

    Computed as sqrt(||w||^2 + (tau kappa - mu)^2) / mu where L w = psi_x
    for the oracle's Cholesky factor L of H(x).
    """
    mu = gap(z, nu)
    psi_x, _ = centrality_residual(z, mu, ev.gradient)
    w = solve_lower(ev.cholesky, psi_x)
    return float(np.sqrt(w @ w + (z.tau * z.kappa - mu) ** 2) / mu)


@dataclass(frozen=True)
class NewtonRhs:
    """Right-hand side of the embedding Newton system, one block per equation.

    The unknown direction d = (dy, dx, dtau, ds, dkappa) satisfies

        A dx - b dtau                  = r1
        -A'dy + c dtau - ds            = r2
        b'dy - c'dx - dkappa           = r3
        ds + mu H dx                   = r4
        dkappa + (mu / tau^2) dtau     = r5
    """

    r1: np.ndarray
    r2: np.ndarray
    r3: float
    r4: np.ndarray
    r5: float


@dataclass(frozen=True)
class Direction:
    dy: np.ndarray
    dx: np.ndarray
    dtau: float
    ds: np.ndarray
    dkappa: float

    def __add__(self, other: "Direction") -> "Direction":
        return Direction(
            self.dy + other.dy,
            self.dx + other.dx,
            self.dtau + other.dtau,
            self.ds + other.ds,
            self.dkappa + other.dkappa,
        )


def newton_solve(
    prob: ProblemData, z: Iterate, mu: float, ev: BarrierEval, rhs: NewtonRhs
) -> Direction:
    """Solve the embedding Newton system for one direction.

    ds and dkappa are eliminated through the equality rows, dx through the
    scaled Hessian, leaving an m x m positive-definite system plus a scalar
    bordering for dtau. The oracle's factor L of H(x) is reused (the factor
    of mu H is sqrt(mu) L, so no refactorization happens here), and one round
    of iterative refinement against the full system cleans up the direction.
    A Cholesky breakdown of the reduced matrix is retried once with a small
    trace-scaled diagonal shift before giving up.
    """
    A, b, c = prob.A, prob.b, prob.c
    m = prob.m
    L = ev.cholesky
    gamma = mu / z.tau**2

    def hinv(v):
        # (mu H)^{-1} v from the oracle factor
        return solve_lower_t(L, solve_lower(L, v)) / mu

    u = hinv(c)
    w_vec = b - A.matvec(u)
    half_c = solve_lower(L, c) / np.sqrt(mu)  # B^{-1/2} c
    if m > 0:
        At = A.toarray().T
        W = solve_lower(L, At)
        N = (W.T @ W) / mu
        LN = try_chol(N)
        if LN is None:
            t = float(np.trace(N)) / m
            shift = 1e-12 * (t if t > 0.0 else 1.0)
            LN = try_chol(N + shift * np.eye(m))
            if LN is None:
                raise SingularSystemError(
                    "reduced normal-equations matrix is not positive definite"
                )
        q_vec = A.matvec(u) + b
        v2 = solve_lower_t(LN, solve_lower(LN, q_vec))
        # the bordering scalar is b'N^{-1}b + ||(I - P) B^{-1/2}c||^2 + gamma,
        # a sum of squares; evaluating it in that form avoids the massive
        # cancellation the naive w'v2 + c'u + gamma suffers at small mu
        half_b = solve_lower(LN, b)
        vc = solve_lower_t(LN, solve_lower(LN, A.matvec(u)))
        resid_c = half_c - (W @ vc) / np.sqrt(mu)
        den = float(half_b @ half_b + resid_c @ resid_c + gamma)
    else:
        LN = None
        v2 = np.zeros(0)
        den = float(half_c @ half_c + gamma)
    if not np.isfinite(den) or den <= 0.0:
        raise SingularSystemError("tau bordering lost positive definiteness")

    def reduced(r1, r2, r3, r4, r5):
        r24 = r2 + r4
        hr = hinv(r24)
        g1 = r1 - A.matvec(hr)
        g2 = r3 + r5 + float(c @ hr)
        if m > 0:
            v1 = solve_lower_t(LN, solve_lower(LN, g1))
        else:
            v1 = np.zeros(0)
        dtau = (g2 - float(w_vec @ v1)) / den
        dy = v1 + dtau * v2
        dx = hinv(r24 + A.matvec(dy, transpose=True) - c * dtau)
        ds = -A.matvec(dy, transpose=True) + c * dtau - r2
        dkappa = float(b @ dy - c @ dx) - r3
        return Direction(dy, dx, dtau, ds, dkappa)

    d = reduced(rhs.r1, rhs.r2, rhs.r3, rhs.r4, rhs.r5)
    # one refinement round: rows 2 and 3 are satisfied by construction, so
    # only the primal and complementarity rows carry residual
    rho1 = rhs.r1 - (A.matvec(d.dx) - b * d.dtau)
    rho4 = rhs.r4 - (d.ds + mu * (ev.hessian @ d.dx))
    rho5 = rhs.r5 - (d.dkappa + gamma * d.dtau)
    corr = reduced(rho1, np.zeros(prob.n), 0.0, rho4, rho5)
    return d + corr
