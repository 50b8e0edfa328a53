"""Tagged cone descriptions and the matrix lift that makes them solvable.

Users describe the cone as an ordered list of ConeSpec entries (types:
``free``, ``lp``, ``socp``, ``exp``, ``gpow``). Free blocks have no barrier
of their own: each one gets a dummy coordinate prepended and is embedded in
a second-order cone one dimension up, which keeps every block a proper cone
without touching the constraint matrix rows. ``lift`` inserts the matching
zero columns into (A, c), and results are stripped back to the ambient
coordinates before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .barriers import (
    Barrier,
    ExponentialBarrier,
    NonnegativeBarrier,
    PowerBarrier,
    ProductBarrier,
    SecondOrderBarrier,
    free_embedding,
)
from .hsd import ProblemData
from .linalg import DimensionMismatch, SparseMatrix
from .solver import SolverOptions, SolverResult, solve

__all__ = [
    "ConeSpecError",
    "ConeSpec",
    "ConeProduct",
    "build_cones",
    "default_x0",
    "embed_point",
    "strip_point",
    "lift",
    "solve_cones",
]

CONE_TYPES = ("free", "lp", "socp", "exp", "gpow")


class ConeSpecError(ValueError):
    """A cone description is malformed."""


@dataclass(frozen=True)
class ConeSpec:
    """One cone block: a type tag, its dimension, and gpow weights if any.

    ``dim`` may be omitted for exp (always 3) and gpow (len(lam) + 1).
    """

    type: str
    dim: int | None = None
    lam: tuple | None = None

    def __post_init__(self):
        if self.type not in CONE_TYPES:
            raise ConeSpecError(f"unknown cone type {self.type!r}")
        lam = self.lam
        if self.type == "gpow":
            if lam is None:
                raise ConeSpecError("gpow requires weights (lam)")
            lam = tuple(float(v) for v in np.atleast_1d(np.asarray(lam, float)))
            if min(lam) <= 0.0 or abs(sum(lam) - 1.0) > 1e-12:
                raise ConeSpecError("gpow weights must be positive and sum to 1")
            object.__setattr__(self, "lam", lam)
            expected = len(lam) + 1
            if self.dim is None:
                object.__setattr__(self, "dim", expected)
            elif self.dim != expected:
                raise ConeSpecError(
                    f"gpow dim {self.dim} does not match len(lam) + 1 = {expected}"
                )
            return
        if lam is not None:
            raise ConeSpecError(f"{self.type} does not take weights")
        if self.type == "exp":
            if self.dim is None:
                object.__setattr__(self, "dim", 3)
            elif self.dim != 3:
                raise ConeSpecError("exp cone has dimension 3")
            return
        if self.dim is None or self.dim < 1:
            raise ConeSpecError(f"{self.type} needs a positive dimension")
        object.__setattr__(self, "dim", int(self.dim))


def _block_oracle(spec: ConeSpec) -> Barrier:
    if spec.type == "free":
        return free_embedding(spec.dim)
    if spec.type == "lp":
        return NonnegativeBarrier(spec.dim)
    if spec.type == "socp":
        return SecondOrderBarrier(spec.dim)
    if spec.type == "exp":
        return ExponentialBarrier()
    return PowerBarrier(spec.lam)


@dataclass(frozen=True)
class ConeProduct:
    """Compiled cone list: layout bookkeeping plus the product oracle.

    ``ambient_to_internal[i]`` is where ambient coordinate i lives in the
    lifted vector; ``dummy_positions`` are the internal indices of the
    free-block dummies (internal_dim = ambient_dim + len(dummy_positions)).
    """

    specs: tuple
    ambient_dim: int
    internal_dim: int
    dummy_positions: tuple
    ambient_to_internal: np.ndarray = field(repr=False)
    oracle: Barrier = field(repr=False)


def build_cones(specs) -> ConeProduct:
    """Validate a cone list and compile layout plus product barrier."""
    specs = tuple(
        s if isinstance(s, ConeSpec) else ConeSpec(**dict(s)) for s in specs
    )
    if not specs:
        raise ConeSpecError("cone list is empty")
    factors = []
    ambient_map: list[int] = []
    dummies: list[int] = []
    internal = 0
    for spec in specs:
        factors.append(_block_oracle(spec))
        if spec.type == "free":
            dummies.append(internal)
            internal += 1
        ambient_map.extend(range(internal, internal + spec.dim))
        internal += spec.dim
    oracle = ProductBarrier(factors)
    assert oracle.dim == internal
    return ConeProduct(
        specs=specs,
        ambient_dim=len(ambient_map),
        internal_dim=internal,
        dummy_positions=tuple(dummies),
        ambient_to_internal=np.asarray(ambient_map, dtype=np.int64),
        oracle=oracle,
    )


def default_x0(cp: ConeProduct) -> np.ndarray:
    """Canonical interior start in internal coordinates.

    Per block: lp all ones, socp (1, 0, ...), exp (2, 1, 0), gpow (ones, 0),
    free (1, zeros) including the dummy.
    """
    x0 = cp.oracle.initial_point
    if not cp.oracle.eval(x0, order=0).in_interior:
        raise ConeSpecError("default start failed the interior check")
    return x0


def embed_point(cp: ConeProduct, x) -> np.ndarray:
    """Lift an ambient point, giving each free dummy a strictly feasible value."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (cp.ambient_dim,):
        raise DimensionMismatch(
            f"point has shape {x.shape}, ambient dimension is {cp.ambient_dim}"
        )
    v = np.zeros(cp.internal_dim)
    v[cp.ambient_to_internal] = x
    for spec, block in zip(cp.specs, cp.oracle.blocks(v)):
        if spec.type == "free":
            block[0] = np.sqrt(1.0 + block[1:] @ block[1:])
    return v


def strip_point(cp: ConeProduct, v) -> np.ndarray:
    """Drop dummy coordinates, returning the ambient point."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (cp.internal_dim,):
        raise DimensionMismatch(
            f"point has shape {v.shape}, internal dimension is {cp.internal_dim}"
        )
    return v[cp.ambient_to_internal].copy()


def lift(prob: ProblemData, cp: ConeProduct) -> ProblemData:
    """Insert zero columns for the dummies into A and zero entries into c."""
    if prob.n != cp.ambient_dim:
        raise DimensionMismatch(
            f"problem has {prob.n} columns, cone list spans {cp.ambient_dim}"
        )
    if not cp.dummy_positions:
        return prob
    rows, cols, vals = prob.A.triplets()
    A_int = SparseMatrix(
        prob.m, cp.internal_dim, rows, cp.ambient_to_internal[cols], vals
    )
    c_int = np.zeros(cp.internal_dim)
    c_int[cp.ambient_to_internal] = prob.c
    return ProblemData(A_int, prob.b, c_int)


def _as_sparse(A) -> SparseMatrix:
    if isinstance(A, SparseMatrix):
        return A
    if hasattr(A, "tocoo"):  # scipy sparse
        coo = A.tocoo()
        return SparseMatrix(coo.shape[0], coo.shape[1], coo.row, coo.col, coo.data)
    return SparseMatrix.from_dense(np.asarray(A, dtype=np.float64))


def solve_cones(
    c, A, b, cones, x0=None, options: SolverOptions | None = None
) -> SolverResult:
    """Solve min c'x s.t. Ax = b with x in the product of tagged cones.

    ``cones`` is a sequence of ConeSpec (or dicts with the same fields) laid
    out in variable order. The returned x and s are in ambient coordinates;
    free-block dummies never leave this function.
    """
    cp = build_cones(cones)
    prob = ProblemData(_as_sparse(A), b, c)
    if prob.n != cp.ambient_dim:
        raise DimensionMismatch(
            f"A has {prob.n} columns but the cone list spans {cp.ambient_dim}"
        )
    lifted = lift(prob, cp)
    start = default_x0(cp) if x0 is None else embed_point(cp, x0)
    result = solve(lifted, cp.oracle, start, options)
    if cp.dummy_positions:
        # dummies carry zero cost, so objectives are unaffected by the strip
        result.x = result.x[cp.ambient_to_internal]
        result.s = result.s[cp.ambient_to_internal]
    return result
