"""Predictor-corrector interior-point solver on the self-dual embedding.

One iteration is a predictor step (aim at the solution, long line search
inside a wide proximity ball) followed by damped corrector steps that pull
the iterate back into a tight neighborhood of the central path. The
embedding makes infeasibility detection a byproduct: tau and kappa race
each other, and whichever wins determines whether a solution or a Farkas
certificate is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .barriers import Barrier, BarrierEval, ExteriorPointError
from .hsd import (
    Direction,
    Iterate,
    NewtonRhs,
    ProblemData,
    SingularSystemError,
    centrality_residual,
    gap,
    newton_solve,
    proximity,
    residuals,
)
from .linalg import DimensionMismatch

__all__ = [
    "SolverStatus",
    "SolverOptions",
    "SolverResult",
    "IterationRecord",
    "LineSearchError",
    "initial_iterate",
    "solve",
]


class SolverStatus(Enum):
    OPTIMAL = "Optimal"
    PRIMAL_INFEASIBLE = "PrimalInfeasible"
    DUAL_INFEASIBLE = "DualInfeasible"
    ITERATION_LIMIT = "IterationLimit"
    NUMERICAL_ERROR = "NumericalError"


_STATUS_STRINGS = {
    SolverStatus.OPTIMAL: "optimal solution found",
    SolverStatus.PRIMAL_INFEASIBLE: "primal infeasible; Farkas certificate in (y, s)",
    SolverStatus.DUAL_INFEASIBLE: "dual infeasible; improving ray in x",
    SolverStatus.ITERATION_LIMIT: "iteration limit reached",
    SolverStatus.NUMERICAL_ERROR: "numerical difficulties",
}


class LineSearchError(RuntimeError):
    """A line search or corrector phase could not make progress."""


@dataclass
class SolverOptions:
    """Tuning knobs; the defaults are safe for all built-in cones.

    optim_tol drives both the embedding convergence test and the
    de-homogenized solution quality; eta is the central-path proximity kept
    after correction and pred_beta the wider ball the predictor may roam.
    """

    optim_tol: float = 1e-6
    max_iter: int = 500
    verbose: bool = False
    eta: float = 0.07
    pred_beta: float = 0.5
    max_corr_steps: int = 8
    ls_factor: float = 0.5
    ls_max_steps: int = 60
    infeas_tol: float = 1e-8

    def __post_init__(self):
        if not (0.0 < self.eta < self.pred_beta < 1.0):
            raise ValueError("need 0 < eta < pred_beta < 1")
        if not (0.0 < self.optim_tol < 1.0):
            raise ValueError("optim_tol must be in (0, 1)")
        if not (0.0 < self.ls_factor < 1.0):
            raise ValueError("ls_factor must be in (0, 1)")
        if self.max_iter < 1 or self.max_corr_steps < 1 or self.ls_max_steps < 1:
            raise ValueError("iteration counts must be positive")
        if self.infeas_tol <= 0.0:
            raise ValueError("infeas_tol must be positive")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    mu: float
    primal_norm: float
    dual_norm: float
    gap_abs: float
    step: float
    corrector_steps: int
    prox: float


@dataclass
class SolverResult:
    status: SolverStatus
    status_string: str
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    tau: float
    kappa: float
    p_obj: float
    d_obj: float
    iterations: int
    residual_norms: dict
    history: list = field(default_factory=list)
    solve_seconds: float = 0.0


def initial_iterate(prob: ProblemData, oracle: Barrier, x0=None) -> Iterate:
    """Canonical embedding start: y = 0, tau = kappa = 1, s = -grad f(x0).

    By the homogeneity identity x0's0 = nu, so the initial complementarity
    gap is exactly 1 and the point sits on the central path.
    """
    if oracle.dim != prob.n:
        raise DimensionMismatch(
            f"oracle dimension {oracle.dim} does not match n = {prob.n}"
        )
    if x0 is None:
        x0 = oracle.initial_point
        if x0 is None:
            raise ValueError("oracle has no canonical initial point; pass x0")
    x0 = np.asarray(x0, dtype=np.float64)
    ev = oracle.eval(x0, order=1)
    if not ev.in_interior:
        raise ExteriorPointError("initial point is not strictly interior")
    return Iterate(np.zeros(prob.m), x0.copy(), 1.0, -ev.gradient, 1.0)


def _boundary_cap(z: Iterate, d: Direction) -> float:
    """Largest step keeping at least 1% of the current tau and kappa."""
    alpha = 1.0
    if d.dtau < 0.0:
        alpha = min(alpha, -0.99 * z.tau / d.dtau)
    if d.dkappa < 0.0:
        alpha = min(alpha, -0.99 * z.kappa / d.dkappa)
    return alpha


def _predictor(prob, oracle, z, ev, opts):
    """Aim at the embedding solution, backtrack into the pred_beta ball."""
    nu = oracle.nu
    mu = gap(z, nu)
    res = residuals(z, prob)
    rhs = NewtonRhs(-res.primal, -res.dual, -res.gap, -z.s, -z.kappa)
    d = newton_solve(prob, z, mu, ev, rhs)
    alpha = _boundary_cap(z, d)
    for _ in range(opts.ls_max_steps):
        zt = z.step(d, alpha)
        if zt.tau > 0.0 and zt.kappa > 0.0:
            evt = oracle.eval(zt.x, order=3)
            if evt.in_interior:
                mut = gap(zt, nu)
                if mut > 0.0 and proximity(zt, evt, nu) <= opts.pred_beta:
                    return zt, evt, alpha
        alpha *= opts.ls_factor
    raise LineSearchError("predictor line search found no acceptable step")


def _corrector(prob, oracle, z, ev, opts):
    """Damped centering steps until the iterate is back within eta."""
    nu = oracle.nu
    prox = proximity(z, ev, nu)
    for k in range(opts.max_corr_steps):
        if prox <= opts.eta:
            return z, ev, k
        mu = gap(z, nu)
        psi_x, psi_k = centrality_residual(z, mu, ev.gradient)
        rhs = NewtonRhs(
            np.zeros(prob.m), np.zeros(prob.n), 0.0, -psi_x, -psi_k
        )
        d = newton_solve(prob, z, mu, ev, rhs)
        alpha = _boundary_cap(z, d)
        improved = False
        for _ in range(opts.ls_max_steps):
            zt = z.step(d, alpha)
            if zt.tau > 0.0 and zt.kappa > 0.0:
                evt = oracle.eval(zt.x, order=3)
                if evt.in_interior:
                    mut = gap(zt, nu)
                    if mut > 0.0:
                        proxt = proximity(zt, evt, nu)
                        if proxt < prox:
                            z, ev, prox = zt, evt, proxt
                            improved = True
                            break
            alpha *= opts.ls_factor
        if not improved:
            raise LineSearchError("corrector step stalled")
    if prox > opts.eta:
        raise LineSearchError("corrector failed to re-center the iterate")
    return z, ev, opts.max_corr_steps


def _classify(z, prob, nu, mu0, res0_norm, opts):
    """Decide whether the iterate certifies optimality or infeasibility.

    The embedding must first have converged relative to the start (both the
    complementarity gap and the residual norm shrunk by optim_tol). Then
    tau against kappa tells which limit point we reached; an optimal
    declaration additionally demands de-homogenized residuals and duality
    gap at the tolerance, so returned solutions meet the advertised quality
    regardless of problem scaling.
    """
    mu_now = gap(z, nu)
    res = residuals(z, prob)
    eps = opts.optim_tol
    if mu_now > eps * mu0 or res.norm() > eps * res0_norm:
        return None
    b, c = prob.b, prob.c
    if z.kappa < z.tau and z.tau >= opts.infeas_tol * max(1.0, z.kappa):
        xh = z.x / z.tau
        yh = z.y / z.tau
        sh = z.s / z.tau
        p_obj = float(c @ xh)
        d_obj = float(b @ yh)
        rp = np.linalg.norm(prob.A.matvec(xh) - b) / (1.0 + np.linalg.norm(b))
        rd = np.linalg.norm(
            c - prob.A.matvec(yh, transpose=True) - sh
        ) / (1.0 + np.linalg.norm(c))
        dgap = abs(p_obj - d_obj) / (1.0 + abs(d_obj))
        if max(rp, rd, dgap) <= eps:
            return SolverStatus.OPTIMAL
        return None
    if z.tau < opts.infeas_tol * z.kappa:
        if float(b @ z.y) > opts.infeas_tol * max(1.0, np.linalg.norm(z.y)):
            return SolverStatus.PRIMAL_INFEASIBLE
        if float(c @ z.x) < -opts.infeas_tol * max(1.0, np.linalg.norm(z.x)):
            return SolverStatus.DUAL_INFEASIBLE
    return None


def _build_result(status, detail, z, prob, nu, history, t0):
    res = residuals(z, prob)
    norms = {
        "primal": float(np.linalg.norm(res.primal)),
        "dual": float(np.linalg.norm(res.dual)),
        "gap": abs(res.gap),
        "mu": gap(z, nu),
    }
    if status is SolverStatus.OPTIMAL:
        x = z.x / z.tau
        y = z.y / z.tau
        s = z.s / z.tau
    else:
        x, y, s = z.x.copy(), z.y.copy(), z.s.copy()
    status_string = _STATUS_STRINGS[status]
    if detail:
        status_string = f"{status_string}: {detail}"
    return SolverResult(
        status=status,
        status_string=status_string,
        x=x,
        y=y,
        s=s,
        tau=z.tau,
        kappa=z.kappa,
        p_obj=float(prob.c @ x),
        d_obj=float(prob.b @ y),
        iterations=len(history),
        residual_norms=norms,
        history=history,
        solve_seconds=time.perf_counter() - t0,
    )


_LOG_HEADER = (
    f"{'iter':>4} {'mu':>10} {'|rP|':>10} {'|rD|':>10} {'|rG|':>10} "
    f"{'step':>8} {'corr':>4} {'prox':>8}"
)


def solve(
    prob: ProblemData,
    oracle: Barrier,
    x0=None,
    options: SolverOptions | None = None,
) -> SolverResult:
    """Run the predictor-corrector method on the embedded problem.

    Parameters
    ----------
    prob : ProblemData
        Equality data (A, b, c) of the conic program min c'x, Ax = b, x in K.
    oracle : Barrier
        Barrier oracle for K; its dimension must equal the number of columns
        of A.
    x0 : array, optional
        Strictly interior starting point; the oracle's canonical point is
        used when omitted.
    options : SolverOptions, optional

    Returns
    -------
    SolverResult
        Status plus the (de-homogenized, when optimal) primal-dual solution,
        objective values, residual norms, and the per-iteration history.
    """
    opts = options if options is not None else SolverOptions()
    t0 = time.perf_counter()
    z = initial_iterate(prob, oracle, x0)
    ev = oracle.eval(z.x, order=3)
    if not ev.in_interior:
        raise ExteriorPointError(
            "Hessian factorization failed at the initial point"
        )
    nu = oracle.nu
    mu0 = gap(z, nu)
    res0_norm = residuals(z, prob).norm()
    history: list[IterationRecord] = []
    if opts.verbose:
        print(_LOG_HEADER)
    status = SolverStatus.ITERATION_LIMIT
    detail = ""
    try:
        for it in range(opts.max_iter + 1):
            verdict = _classify(z, prob, nu, mu0, res0_norm, opts)
            if verdict is not None:
                status = verdict
                break
            if it == opts.max_iter:
                status = SolverStatus.ITERATION_LIMIT
                break
            z, ev, alpha = _predictor(prob, oracle, z, ev, opts)
            z, ev, ncorr = _corrector(prob, oracle, z, ev, opts)
            res = residuals(z, prob)
            rec = IterationRecord(
                iteration=it + 1,
                mu=gap(z, nu),
                primal_norm=float(np.linalg.norm(res.primal)),
                dual_norm=float(np.linalg.norm(res.dual)),
                gap_abs=abs(res.gap),
                step=alpha,
                corrector_steps=ncorr,
                prox=proximity(z, ev, nu),
            )
            history.append(rec)
            if opts.verbose:
                print(
                    f"{rec.iteration:>4} {rec.mu:>10.3e} {rec.primal_norm:>10.3e} "
                    f"{rec.dual_norm:>10.3e} {rec.gap_abs:>10.3e} "
                    f"{rec.step:>8.2e} {rec.corrector_steps:>4} {rec.prox:>8.2e}"
                )
    except (LineSearchError, SingularSystemError) as exc:
        status = SolverStatus.NUMERICAL_ERROR
        detail = str(exc)
    result = _build_result(status, detail, z, prob, nu, history, t0)
    if opts.verbose:
        print(f"status: {result.status.value} ({result.status_string})")
    return result
