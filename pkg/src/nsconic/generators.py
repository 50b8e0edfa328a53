"""Seeded random instance generators used by experiments and tests."""

from __future__ import annotations

import numpy as np

from .hsd import ProblemData

__all__ = ["random_lp"]


def random_lp(m: int, n: int, seed: int = 0):
    """Random standard-form LP that is feasible and bounded by construction.

    A has uniform entries on [-1, 1]; a strictly positive x_hat on [1, 2]
    defines b = A x_hat, and c = A'y_hat + s_hat with s_hat > 0 makes the
    dual strictly feasible too, so strong duality holds and the solver must
    reach Optimal. Returns (problem, x_hat); x_hat doubles as an interior
    starting point.
    """
    if not 0 < m < n:
        raise ValueError("need 0 < m < n")
    rng = np.random.default_rng(seed)
    A = rng.uniform(-1.0, 1.0, (m, n))
    x_hat = rng.uniform(1.0, 2.0, n)
    b = A @ x_hat
    y_hat = rng.uniform(-1.0, 1.0, m)
    s_hat = rng.uniform(1.0, 2.0, n)
    c = A.T @ y_hat + s_hat
    return ProblemData(A, b, c), x_hat
