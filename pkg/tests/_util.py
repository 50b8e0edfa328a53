"""Shared helpers for the test suite: interior samplers, random instances,
and a dense reference solver for the embedding Newton system."""

import numpy as np

from nsconic.barriers import (
    ExponentialBarrier,
    NonnegativeBarrier,
    PowerBarrier,
    ProductBarrier,
    SecondOrderBarrier,
)
from nsconic.hsd import Iterate, NewtonRhs, ProblemData


def sample_block(oracle, rng):
    """Draw a comfortably interior point of a single built-in cone block."""
    if isinstance(oracle, NonnegativeBarrier):
        return rng.uniform(0.5, 3.0, oracle.dim)
    if isinstance(oracle, SecondOrderBarrier):
        x = rng.standard_normal(oracle.dim)
        x[0] = np.linalg.norm(x[1:]) + rng.uniform(0.5, 2.0)
        return x
    if isinstance(oracle, ExponentialBarrier):
        x1 = rng.uniform(0.5, 2.0)
        x2 = rng.uniform(0.5, 2.0)
        return np.array([x1, x2, x2 * np.log(x1 / x2) - rng.uniform(0.3, 1.5)])
    if isinstance(oracle, PowerBarrier):
        x = rng.uniform(0.5, 2.0, oracle.dim - 1)
        power = np.prod(x**oracle.weights)
        return np.concatenate([x, [rng.uniform(-0.7, 0.7) * power]])
    if isinstance(oracle, ProductBarrier):
        return np.concatenate([sample_block(f, rng) for f in oracle.factors])
    raise TypeError(f"no sampler for {type(oracle).__name__}")


def random_mixed_cone(rng, dim_budget):
    """A product of 1-3 random cone blocks with total dimension <= budget."""
    factors = []
    remaining = dim_budget
    while remaining >= 2 and len(factors) < 3:
        kind = rng.integers(0, 4)
        if kind == 0:
            d = int(rng.integers(1, min(remaining, 6) + 1))
            factors.append(NonnegativeBarrier(d))
        elif kind == 1:
            d = int(rng.integers(2, min(remaining, 6) + 1))
            factors.append(SecondOrderBarrier(d))
        elif kind == 2 and remaining >= 3:
            factors.append(ExponentialBarrier())
        elif remaining >= 3:
            k = int(rng.integers(2, min(remaining - 1, 3) + 1))
            w = rng.uniform(0.5, 2.0, k)
            factors.append(PowerBarrier(w / w.sum()))
        else:
            continue
        remaining -= factors[-1].dim
    if not factors:
        factors.append(NonnegativeBarrier(dim_budget))
    return ProductBarrier(factors)


def random_state(prob, oracle, rng):
    """Random embedding iterate with x and s strictly interior (primal/dual)."""
    x = sample_block(oracle, rng)
    w = sample_block(oracle, rng)
    s = -oracle.eval(w, order=1).gradient
    y = rng.standard_normal(prob.m)
    tau = float(rng.uniform(0.5, 2.0))
    kappa = float(rng.uniform(0.5, 2.0))
    return Iterate(y, x, tau, s, kappa)


def random_problem(oracle, m, rng):
    n = oracle.dim
    A = rng.standard_normal((m, n))
    return ProblemData(A, rng.standard_normal(m), rng.standard_normal(n))


def dense_newton_reference(prob, z, mu, ev, rhs: NewtonRhs):
    """Assemble and solve the full embedding Newton system densely."""
    m, n = prob.m, prob.n
    A = prob.A.toarray()
    H = ev.hessian
    size = m + 2 * n + 2
    iy = slice(0, m)
    ix = slice(m, m + n)
    it = m + n
    is_ = slice(m + n + 1, m + n + 1 + n)
    ik = m + n + 1 + n
    K = np.zeros((size, size))
    # A dx - b dtau = r1
    K[0:m, ix] = A
    K[0:m, it] = -prob.b
    # -A'dy + c dtau - ds = r2
    r2rows = slice(m, m + n)
    K[r2rows, iy] = -A.T
    K[r2rows, it] = prob.c
    K[r2rows, is_] = -np.eye(n)
    # b'dy - c'dx - dkappa = r3
    K[it, iy] = prob.b
    K[it, ix] = -prob.c
    K[it, ik] = -1.0
    # ds + mu H dx = r4
    r4rows = slice(m + n + 1, m + n + 1 + n)
    K[r4rows, ix] = mu * H
    K[r4rows, is_] = np.eye(n)
    # dkappa + (mu/tau^2) dtau = r5
    K[ik, it] = mu / z.tau**2
    K[ik, ik] = 1.0
    rhs_vec = np.concatenate([rhs.r1, rhs.r2, [rhs.r3], rhs.r4, [rhs.r5]])
    sol = np.linalg.solve(K, rhs_vec)
    return sol[iy], sol[ix], float(sol[it]), sol[is_], float(sol[ik])


def direction_as_vector(d):
    return np.concatenate([d.dy, d.dx, [d.dtau], d.ds, [d.dkappa]])
