"""Command-line interface: triple files in, JSON reports or tables out.

Exit codes partition outcomes: 0 all checks passed / classification
produced, 1 a mathematical check failed, 2 usage, argument, or parse
error.  Reports go to stdout, diagnostics to stderr.  The CARTAN_TOL
environment variable overrides the default tolerance everywhere; the
tolerance in force is echoed in every report.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SchemaError, ValidationError
from .frames import (
    curvature_from_structure,
    curvature_sign_calibration,
    koszul_curvature,
    milnor_metric,
    ricci_from_curvature,
    sphere_coframe,
)
from .liealg import fingerprint, jacobi_residual, trace_inner, rotation_generator
from .serialization import (
    dumps_report,
    load_constants,
    load_matrix,
    load_subspace,
    load_triple,
    load_triple_with_tolerance,
    report_document,
)
from .threedim import Params3D, admissible, classify
from .tolerances import resolve_tol
from .triples import CheckResult, check_leq, orbit_equivalent, symmetry_algebra, validate_triple

TABLE_COLUMNS = [
    "a", "b", "k", "admissible", "ricci_1", "ricci_2", "ricci_3", "scalar",
    "sectional+", "cartan_sphere", "maximal", "isom_dim", "topology",
]


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def emit_table(reports: list[dict]) -> str:
    """Aligned text table of classification reports, fixed column order."""
    kinds = {doc.get("command") for doc in reports}
    if kinds - {"classify3d"}:
        raise ValueError(f"table output needs homogeneous classify3d reports, got {sorted(kinds)}")
    rows = []
    for doc in reports:
        inputs = doc.get("inputs", {})
        verdicts = doc.get("verdicts", {})
        ricci = verdicts.get("ricci_eigenvalues") or [None, None, None]
        rows.append([
            _fmt(inputs.get("a")), _fmt(inputs.get("b")), _fmt(inputs.get("k")),
            _fmt(verdicts.get("admissible")),
            _fmt(ricci[0]), _fmt(ricci[1]), _fmt(ricci[2]),
            _fmt(verdicts.get("scalar_curvature")),
            _fmt(verdicts.get("positive_sectional")),
            _fmt(verdicts.get("cartan_sphere")),
            _fmt(verdicts.get("maximal")),
            _fmt(verdicts.get("isometry_dim")),
            _fmt(verdicts.get("topology_label")),
        ])
    widths = [len(h) for h in TABLE_COLUMNS]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(TABLE_COLUMNS, widths)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _comma_floats(expected: int):
    def parse(text: str):
        parts = text.split(",")
        if len(parts) != expected:
            raise argparse.ArgumentTypeError(
                f"expected {expected} comma-separated values, got {len(parts)}"
            )
        try:
            return tuple(float(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not numeric: {text!r}") from None
    return parse


def _parse_axis(spec: str, name: str) -> list[float]:
    try:
        lo_s, step_s, hi_s = spec.split(":")
        lo, step, hi = float(lo_s), float(step_s), float(hi_s)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"axis {name} must look like lo:step:hi, got {spec!r}"
        ) from None
    if step <= 0:
        raise argparse.ArgumentTypeError(f"axis {name}: step must be positive")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"axis {name}: hi must be >= lo")
    count = int(round((hi - lo) / step)) + 1
    return [round(lo + i * step, 12) for i in range(count)]


def _parse_grid(text: str) -> dict:
    axes: dict[str, list[float]] = {}
    for chunk in text.split(","):
        if "=" not in chunk:
            raise argparse.ArgumentTypeError(f"bad grid chunk {chunk!r}")
        name, spec = chunk.split("=", 1)
        name = name.strip()
        if name not in ("a", "b", "k") or name in axes:
            raise argparse.ArgumentTypeError(f"grid axes must be a, b, k once each; got {name!r}")
        axes[name] = _parse_axis(spec, name)
    if set(axes) != {"a", "b", "k"}:
        raise argparse.ArgumentTypeError(f"grid needs all of a, b, k; got {sorted(axes)}")
    return {"spec": text, "axes": axes}


def _check(name: str, residual: float, tol: float) -> CheckResult:
    return CheckResult(name, float(residual), float(residual) <= tol)


def _classify_document(a: float, b: float, k: float, tol: float) -> tuple[int, dict]:
    p = Params3D(a, b, k)
    adm = admissible(p, tol)
    checks = [_check(f"admissible:{name}", res, tol) for name, res in sorted(adm.residuals.items())]
    if not adm.ok:
        doc = report_document(
            "classify3d", {"a": a, "b": b, "k": k}, checks, {"admissible": False}, tol
        )
        return 1, doc
    report = classify(p, tol)
    enlargement = None
    if report.enlargement is not None:
        witness = report.enlargement
        f12 = rotation_generator(3, 1, 2)
        enlargement = {
            "target_coefficient": trace_inner(witness.enlarged.curvature[0], f12),
            "embedding_residual": witness.embedding_residual,
            "witness_dim": witness.a_basis.dim,
        }
    verdicts = {
        "admissible": True,
        "ricci_eigenvalues": list(report.ricci_eigenvalues),
        "scalar_curvature": report.scalar_curvature,
        "positive_sectional": report.positive_sectional,
        "cartan_sphere": report.cartan_sphere,
        "maximal": report.maximal,
        "maximal_closed_form": report.maximal_closed_form,
        "isometry_dim": report.isometry_dim,
        "topology_label": report.topology_label,
        "enlargement": enlargement,
    }
    return 0, report_document("classify3d", {"a": a, "b": b, "k": k}, checks, verdicts, tol)


def _cmd_verify(args) -> tuple[int, dict]:
    triple, tol = load_triple_with_tolerance(args.file)
    report = validate_triple(triple, tol=tol)
    verdicts = {"valid": report.valid, "n": triple.n, "isotropy_dim": triple.isotropy.dim}
    if triple.closed is not None:
        verdicts["closed"] = triple.closed
    doc = report_document("verify", {"file": str(args.file)}, report.checks, verdicts, tol)
    return (0 if report.valid else 1), doc


def _cmd_taller(args) -> tuple[int, dict]:
    triple, tol = load_triple_with_tolerance(args.file)
    algebra = symmetry_algebra(triple, tol=tol)
    checks = [_check("jacobi", algebra.jacobi, tol)]
    verdicts = {
        "dim": algebra.dim,
        "isotropy_dim": algebra.isotropy_dim,
        "constants": algebra.constants.c.tolist(),
        "torsion": algebra.torsion_table.tolist(),
    }
    ok = algebra.jacobi <= tol
    if ok:
        fp = fingerprint(algebra.constants, tol=tol)
        verdicts["fingerprint"] = {
            "dim": fp.dim,
            "killing_signature": list(fp.killing_signature),
            "center_dim": fp.center_dim,
            "derived_dim": fp.derived_dim,
            "unimodular": fp.unimodular,
        }
    doc = report_document("taller", {"file": str(args.file)}, checks, verdicts, tol)
    return (0 if ok else 1), doc


def _cmd_classify3d(args) -> tuple[int, dict]:
    tol = resolve_tol()
    return _classify_document(args.a, args.b, args.k, tol)


def _cmd_sweep3d(args) -> tuple[int, dict | list]:
    tol = resolve_tol()
    axes = args.grid["axes"]
    docs = []
    n_admissible = 0
    for a, b, k in itertools.product(axes["a"], axes["b"], axes["k"]):
        code, doc = _classify_document(a, b, k, tol)
        n_admissible += 1 if code == 0 else 0
        docs.append(doc)
    Path(args.out).write_text(dumps_report(docs) + "\n", encoding="utf-8")
    if args.format == "table":
        return 0, docs
    summary = report_document(
        "sweep3d",
        {"grid": args.grid["spec"], "out": str(args.out)},
        [],
        {"points": len(docs), "admissible_points": n_admissible},
        tol,
    )
    return 0, summary


def _cmd_curvature(args) -> tuple[int, dict]:
    tol = resolve_tol()
    constants = load_constants(args.constants)
    jres = jacobi_residual(constants)
    inputs = {
        "constants": str(args.constants),
        "metric": None if args.metric is None else str(args.metric),
        "oracle": bool(args.oracle or args.metric is not None),
    }
    checks = [_check("jacobi", jres, tol)]
    if inputs["oracle"]:
        metric = None if args.metric is None else load_matrix(args.metric)
        result = koszul_curvature(constants, metric, tol=tol)
        verdicts = {
            "route": "koszul",
            "tensor": result.tensor.components.tolist(),
            "sectional_curvatures": result.sectional.tolist(),
            "ricci_eigenvalues": result.ricci_eigenvalues.tolist(),
        }
        return 0, report_document("curvature", inputs, checks, verdicts, tol)
    antisym = float(np.abs(constants + np.swapaxes(constants, 0, 1)).max())
    checks.append(_check("total_antisymmetry", antisym, tol))
    if antisym > tol:
        doc = report_document("curvature", inputs, checks, {"route": "structure"}, tol)
        return 1, doc
    tensor = curvature_from_structure(constants, tol=tol)
    _, ricci_eigs = ricci_from_curvature(tensor, tol=tol)
    sign = curvature_sign_calibration()
    sectional = sign * np.einsum("ijij->ij", tensor.components).copy()
    np.fill_diagonal(sectional, 0.0)
    verdicts = {
        "route": "structure",
        "tensor": tensor.components.tolist(),
        "ricci_eigenvalues": ricci_eigs.tolist(),
        "sectional_curvatures": sectional.tolist(),
        "sign_calibration": sign,
    }
    return 0, report_document("curvature", inputs, checks, verdicts, tol)


def _cmd_reduce(args) -> tuple[int, dict]:
    tol = resolve_tol()
    t1 = load_triple(args.file1, tol=tol)
    t2 = load_triple(args.file2, tol=tol)
    witness_subspace = load_subspace(args.a_basis, tol=tol)
    result = check_leq(t1, t2, witness_subspace, tol=tol)
    verdicts = {"holds": result.holds, "witness_dim": witness_subspace.dim}
    if result.witness is not None:
        verdicts["embedding_residual"] = result.witness.embedding_residual
    doc = report_document(
        "reduce",
        {"file1": str(args.file1), "file2": str(args.file2), "a_basis": str(args.a_basis)},
        result.checks,
        verdicts,
        tol,
    )
    return (0 if result.holds else 1), doc


def _cmd_compare(args) -> tuple[int, dict]:
    tol = resolve_tol()
    t1 = load_triple(args.file1, tol=tol)
    t2 = load_triple(args.file2, tol=tol)
    verdict = orbit_equivalent(t1, t2, seed=args.seed, tol=tol)
    verdicts = {"verdict": verdict.kind}
    if verdict.witness is not None:
        verdicts["witness"] = verdict.witness.tolist()
        verdicts["residual"] = verdict.residual
    elif np.isfinite(verdict.residual):
        verdicts["best_residual"] = verdict.residual
    doc = report_document(
        "compare",
        {"file1": str(args.file1), "file2": str(args.file2), "seed": args.seed},
        [],
        verdicts,
        tol,
    )
    return 0, doc


def _cmd_milnor(args) -> tuple[int, dict]:
    tol = resolve_tol()
    inputs = {"lambda": list(args.lambdas)}
    try:
        metric, curv = milnor_metric(args.lambdas, tol=tol)
    except ValidationError as exc:
        l1, l2, l3 = args.lambdas
        coeffs = (4.0 / (l2 * l3), 4.0 / (l1 * l3), 4.0 / (l1 * l2))
        doc = report_document(
            "milnor", inputs,
            [CheckResult("metric_positive_definite", max(0.0, -min(coeffs)), False)],
            {"error": str(exc)}, tol,
        )
        return 1, doc
    verdicts = {
        "coefficients": list(metric.coefficients),
        "ricci_eigenvalues": curv.ricci_eigenvalues.tolist(),
        "sectional_curvatures": curv.sectional.tolist(),
    }
    return 0, report_document("milnor", inputs, [], verdicts, tol)


def _cmd_sphere_frame(args) -> tuple[int, dict]:
    tol = resolve_tol()
    point = np.asarray(args.point, dtype=float)
    inputs = {"point": point.tolist()}
    unit_residual = abs(float(point @ point) - 1.0)
    if unit_residual > tol:
        doc = report_document(
            "sphere-frame", inputs,
            [CheckResult("unit_point", unit_residual, False)],
            {}, tol,
        )
        return 1, doc
    frame = sphere_coframe(point, tol=tol)
    gram_res = float(np.abs(frame.rows @ frame.rows.T - np.eye(3)).max())
    tangent_res = float(np.abs(frame.rows @ point).max())
    checks = [
        _check("unit_point", unit_residual, tol),
        _check("gram_identity", gram_res, tol),
        _check("tangent_to_point", tangent_res, tol),
    ]
    verdicts = {"rows": frame.rows.tolist()}
    ok = all(c.passed for c in checks)
    return (0 if ok else 1), report_document("sphere-frame", inputs, checks, verdicts, tol)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartanframes",
        description="Validate, build, and classify homogeneous-space structure data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="validate a triple file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("taller", help="build the extended symmetry algebra of a triple file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_taller)

    p = sub.add_parser("classify3d", help="classify one parameter point of the 3D family")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_classify3d)

    p = sub.add_parser("sweep3d", help="classify a parameter grid of the 3D family")
    p.add_argument("--grid", type=_parse_grid, required=True,
                   metavar="a=lo:step:hi,b=lo:step:hi,k=lo:step:hi")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(handler=_cmd_sweep3d)

    p = sub.add_parser("curvature", help="curvature of an invariant frame from structure constants")
    p.add_argument("--constants", required=True)
    p.add_argument("--metric", default=None)
    p.add_argument("--oracle", action="store_true",
                   help="use the Koszul route instead of the structure formula")
    p.set_defaults(handler=_cmd_curvature)

    p = sub.add_parser("reduce", help="check the enlargement order between two triple files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--a-basis", required=True, dest="a_basis")
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("compare", help="decide orthogonal-orbit equivalence of two triple files")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("milnor", help="left-invariant metric on the 3-sphere")
    p.add_argument("--lambda", dest="lambdas", type=_comma_floats(3), required=True,
                   metavar="l1,l2,l3")
    p.set_defaults(handler=_cmd_milnor)

    p = sub.add_parser("sphere-frame", help="adapted coframe of the unit 3-sphere at a point")
    p.add_argument("--point", type=_comma_floats(4), required=True, metavar="x1,x2,x3,x4")
    p.set_defaults(handler=_cmd_sphere_frame)

    return parser


def run(argv) -> int:
    """Parse arguments, execute, print the report; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        code, payload = args.handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "format", "json") == "table":
        reports = payload if isinstance(payload, list) else [payload]
        print(emit_table(reports))
    else:
        print(dumps_report(payload))
    return code


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
