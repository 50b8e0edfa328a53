"""Problem-file and result-document serialization.

The problem file is a JSON document:

    {
      "c": [...], "b": [...],
      "A": {"m": 2, "n": 3, "rows": [...], "cols": [...], "vals": [...]},
      "cones": [{"type": "lp", "dim": 2},
                {"type": "gpow", "dim": 3, "lambda": [0.25, 0.75]}],
      "x0": [...]
    }

Matrix indices are zero-based coordinate triplets. "x0" is optional; every
other field is required, and unknown fields anywhere are rejected so typos
fail loudly instead of being ignored. Floats round-trip exactly (Python's
JSON writer emits shortest full-precision reprs).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .cones import ConeSpec, ConeSpecError
from .linalg import SparseMatrix
from .solver import SolverResult

__all__ = [
    "ProblemFileError",
    "load_problem",
    "save_problem",
    "result_document",
    "write_result",
]


class ProblemFileError(ValueError):
    """The problem file is malformed."""


_TOP_FIELDS = {"c", "b", "A", "cones", "x0"}
_REQUIRED = {"c", "b", "A", "cones"}
_A_FIELDS = {"m", "n", "rows", "cols", "vals"}
_CONE_FIELDS = {"type", "dim", "lambda"}


def _real_array(obj, name) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"field {name!r} is not a real array: {exc}") from None
    if arr.ndim != 1:
        raise ProblemFileError(f"field {name!r} must be a flat array")
    if not np.isfinite(arr).all():
        raise ProblemFileError(f"field {name!r} contains non-finite values")
    return arr


def _parse_matrix(block) -> SparseMatrix:
    if not isinstance(block, dict):
        raise ProblemFileError('"A" must be an object')
    unknown = set(block) - _A_FIELDS
    if unknown:
        raise ProblemFileError(f'unknown field(s) in "A": {sorted(unknown)}')
    missing = _A_FIELDS - set(block)
    if missing:
        raise ProblemFileError(f'missing field(s) in "A": {sorted(missing)}')
    try:
        return SparseMatrix(
            int(block["m"]),
            int(block["n"]),
            np.asarray(block["rows"], dtype=np.int64),
            np.asarray(block["cols"], dtype=np.int64),
            np.asarray(block["vals"], dtype=np.float64),
        )
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"bad matrix block: {exc}") from None


def _parse_cones(entries) -> list[ConeSpec]:
    if not isinstance(entries, list) or not entries:
        raise ProblemFileError('"cones" must be a nonempty array')
    specs = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ProblemFileError(f"cone {i} must be an object")
        unknown = set(entry) - _CONE_FIELDS
        if unknown:
            raise ProblemFileError(f"unknown field(s) in cone {i}: {sorted(unknown)}")
        if "type" not in entry:
            raise ProblemFileError(f"cone {i} is missing its type")
        try:
            specs.append(
                ConeSpec(
                    type=entry["type"],
                    dim=None if entry.get("dim") is None else int(entry["dim"]),
                    lam=entry.get("lambda"),
                )
            )
        except (ConeSpecError, TypeError, ValueError) as exc:
            raise ProblemFileError(f"cone {i}: {exc}") from None
    return specs


def load_problem(path):
    """Read a problem file; returns (c, A, b, cones, x0-or-None)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ProblemFileError("top level must be an object")
    unknown = set(data) - _TOP_FIELDS
    if unknown:
        raise ProblemFileError(f"unknown field(s): {sorted(unknown)}")
    missing = _REQUIRED - set(data)
    if missing:
        raise ProblemFileError(f"missing field(s): {sorted(missing)}")
    A = _parse_matrix(data["A"])
    c = _real_array(data["c"], "c")
    b = _real_array(data["b"], "b")
    m, n = A.shape
    if c.shape != (n,):
        raise ProblemFileError(f"c has {c.size} entries, A has {n} columns")
    if b.shape != (m,):
        raise ProblemFileError(f"b has {b.size} entries, A has {m} rows")
    cones = _parse_cones(data["cones"])
    total = sum(spec.dim for spec in cones)
    if total != n:
        raise ProblemFileError(f"cone dims sum to {total}, expected n = {n}")
    x0 = None
    if data.get("x0") is not None:
        x0 = _real_array(data["x0"], "x0")
        if x0.shape != (n,):
            raise ProblemFileError(f"x0 has {x0.size} entries, expected {n}")
    return c, A, b, cones, x0


def save_problem(path, c, A, b, cones, x0=None):
    """Write a problem file; the exact inverse of load_problem."""
    if not isinstance(A, SparseMatrix):
        A = SparseMatrix.from_dense(np.asarray(A, dtype=np.float64))
    rows, cols, vals = A.triplets()
    doc = {
        "c": list(np.asarray(c, dtype=np.float64)),
        "b": list(np.asarray(b, dtype=np.float64)),
        "A": {
            "m": A.shape[0],
            "n": A.shape[1],
            "rows": [int(i) for i in rows],
            "cols": [int(j) for j in cols],
            "vals": list(vals),
        },
        "cones": [_cone_entry(spec) for spec in cones],
    }
    if x0 is not None:
        doc["x0"] = list(np.asarray(x0, dtype=np.float64))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _cone_entry(spec) -> dict:
    spec = spec if isinstance(spec, ConeSpec) else ConeSpec(**dict(spec))
    entry = {"type": spec.type, "dim": spec.dim}
    if spec.lam is not None:
        entry["lambda"] = list(spec.lam)
    return entry


def result_document(result: SolverResult) -> dict:
    """Serializable view of a result; solveSeconds is the only varying field."""
    return {
        "status": result.status.value,
        "statusString": result.status_string,
        "pObj": result.p_obj,
        "dObj": result.d_obj,
        "iterations": result.iterations,
        "tau": result.tau,
        "kappa": result.kappa,
        "residualNorms": dict(result.residual_norms),
        "x": list(result.x),
        "y": list(result.y),
        "s": list(result.s),
        "solveSeconds": result.solve_seconds,
    }


def write_result(result: SolverResult, dest) -> None:
    """Write the result document as JSON to a path or open text file."""
    doc = result_document(result)
    if hasattr(dest, "write"):
        json.dump(doc, dest, indent=2)
        dest.write("\n")
    else:
        with open(Path(dest), "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
