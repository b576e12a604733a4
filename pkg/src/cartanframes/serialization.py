"""On-disk formats: triple documents in, report documents out.

Everything is UTF-8 JSON.  Matrices are row-major nested lists; pair
indices in triple documents are 1-based to match the classification-table
conventions.  Reports are emitted with sorted keys and a fixed layout so
identical inputs produce byte-identical output (the tool version is the
only environment-dependent field).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SchemaError, ValidationError
from .liealg import Subspace, skew_residual
from .tolerances import resolve_tol
from .triples import CartanTriple, make_triple, pair_indices

__all__ = [
    "document_to_triple",
    "dumps_report",
    "load_constants",
    "load_matrix",
    "load_subspace",
    "load_triple",
    "load_triple_with_tolerance",
    "report_document",
    "save_triple",
    "triple_to_document",
]


def _as_matrix(field: str, value, n: int) -> np.ndarray:
    try:
        mat = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(field, f"not a numeric matrix ({exc})") from None
    if mat.shape != (n, n):
        raise SchemaError(field, f"expected an {n}x{n} matrix, got shape {mat.shape}")
    if not np.isfinite(mat).all():
        raise SchemaError(field, "entries must be finite")
    return mat


def triple_to_document(t: CartanTriple) -> dict:
    """Lossless JSON-ready form of a triple (1-based pair indices)."""
    doc = {
        "n": t.n,
        "g_basis": [m.tolist() for m in t.isotropy.basis],
        "gamma": [m.tolist() for m in t.connection],
        "omega": [
            {"i": i + 1, "j": j + 1, "value": t.curvature[p].tolist()}
            for p, (i, j) in enumerate(pair_indices(t.n))
        ],
    }
    if t.closed is not None:
        doc["closed"] = t.closed
    return doc


def document_to_triple(doc, tol: float | None = None) -> CartanTriple:
    """Parse and validate a triple document; raises SchemaError naming the
    offending field, or ValidationError when an invariant fails."""
    if not isinstance(doc, dict):
        raise SchemaError("document", f"expected a JSON object, got {type(doc).__name__}")
    if "n" not in doc:
        raise SchemaError("n", "missing")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError("n", f"expected a positive integer, got {n!r}")
    tol = resolve_tol(tol if tol is not None else doc.get("tolerance"))

    raw_basis = doc.get("g_basis")
    if not isinstance(raw_basis, list):
        raise SchemaError("g_basis", "expected a list of matrices")
    basis = [_as_matrix(f"g_basis[{idx}]", m, n) for idx, m in enumerate(raw_basis)]
    for idx, m in enumerate(basis):
        res = skew_residual(m)
        if res > tol:
            raise ValidationError(
                f"g_basis[{idx}] not skew-symmetric (residual {res:.3e})"
            )
    isotropy = Subspace.from_matrices(basis, n=n, tol=tol)

    raw_gamma = doc.get("gamma")
    if not isinstance(raw_gamma, list) or len(raw_gamma) != n:
        raise SchemaError("gamma", f"expected a list of {n} matrices")
    gamma = np.stack([_as_matrix(f"gamma[{idx}]", m, n) for idx, m in enumerate(raw_gamma)])

    raw_omega = doc.get("omega", [])
    if not isinstance(raw_omega, list):
        raise SchemaError("omega", "expected a list of {i, j, value} records")
    pairs = pair_indices(n)
    omega = np.zeros((len(pairs), n, n))
    seen = set()
    for idx, record in enumerate(raw_omega):
        if not isinstance(record, dict) or not {"i", "j", "value"} <= set(record):
            raise SchemaError(f"omega[{idx}]", "expected a record with keys i, j, value")
        i, j = record["i"], record["j"]
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
            raise SchemaError(f"omega[{idx}]", f"indices must satisfy 1 <= i < j <= {n}, "
                                               f"got ({i!r}, {j!r})")
        if (i, j) in seen:
            raise SchemaError(f"omega[{idx}]", f"duplicate pair ({i}, {j})")
        seen.add((i, j))
        omega[pairs.index((i - 1, j - 1))] = _as_matrix(f"omega[{idx}].value", record["value"], n)

    closed = doc.get("closed")
    if closed is not None and not isinstance(closed, bool):
        raise SchemaError("closed", f"expected a boolean, got {closed!r}")
    return make_triple(isotropy, gamma, omega, closed=closed, tol=tol)


def load_triple(path, tol: float | None = None) -> CartanTriple:
    doc = _load_json(path)
    return document_to_triple(doc, tol=tol)


def load_triple_with_tolerance(path) -> tuple[CartanTriple, float]:
    """Load a triple and the tolerance in force for it.

    A tolerance recorded in the document wins over the environment
    override, which wins over the default.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SchemaError("document", f"expected a JSON object, got {type(doc).__name__}")
    tol = resolve_tol(doc.get("tolerance"))
    return document_to_triple(doc, tol=tol), tol


def save_triple(path, t: CartanTriple) -> None:
    Path(path).write_text(dumps_report(triple_to_document(t)) + "\n", encoding="utf-8")


def load_constants(path) -> np.ndarray:
    """Structure-constant document: {"dim": m, "c": [[[...]]]}"""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "c" not in doc:
        raise SchemaError("c", "missing structure-constant array")
    try:
        c = np.asarray(doc["c"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError("c", f"not a numeric array ({exc})") from None
    m = doc.get("dim", c.shape[0] if c.ndim == 3 else None)
    if c.ndim != 3 or c.shape != (m, m, m):
        raise SchemaError("c", f"expected shape (dim, dim, dim), got {c.shape}")
    if not np.isfinite(c).all():
        raise SchemaError("c", "entries must be finite")
    return c


def load_matrix(path, key: str = "q") -> np.ndarray:
    doc = _load_json(path)
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(key, "missing matrix")
    try:
        q = np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(key, f"not a numeric matrix ({exc})") from None
    if q.ndim != 2 or q.shape[0] != q.shape[1] or not np.isfinite(q).all():
        raise SchemaError(key, f"expected a finite square matrix, got shape {q.shape}")
    return q


def load_subspace(path, tol: float | None = None) -> Subspace:
    """Subspace document: {"n": n, "basis": [matrices]}"""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "n" not in doc:
        raise SchemaError("n", "missing")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError("n", f"expected a positive integer, got {n!r}")
    raw = doc.get("basis")
    if not isinstance(raw, list):
        raise SchemaError("basis", "expected a list of matrices")
    mats = [_as_matrix(f"basis[{idx}]", m, n) for idx, m in enumerate(raw)]
    return Subspace.from_matrices(mats, n=n, tol=tol)


def _load_json(path):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("document", f"malformed JSON: {exc}") from None


def report_document(command: str, inputs: dict, checks, verdicts: dict,
                    tolerance: float) -> dict:
    """Assemble a report; checks are (name, residual, pass) mappings."""
    return {
        "command": command,
        "inputs": _jsonable(inputs),
        "checks": [
            {"name": c.name, "residual": float(c.residual), "pass": bool(c.passed)}
            for c in checks
        ],
        "verdicts": _jsonable(verdicts),
        "tolerance": tolerance,
        "tool_version": __version__,
    }


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        return float(value) + 0.0  # normalizes -0.0
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    return value


def dumps_report(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, repr floats."""
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False)
