"""The 3D family of multiply-transitive homogeneous geometries.

One-parameter isotropy (rotations of the (1,2)-plane) with connection
values parametrized by (a, b) and a single curvature coefficient k.  The
family's bracket closes into a Lie algebra exactly on the constraint
surface a(k + a^2 + b^2) = ab = 0; on it this module computes the Ricci
spectrum, locates the enlargeable (non-maximal) loci by an explicit
search, and labels the topology of the simply connected realization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .liealg import (
    AlgebraFingerprint,
    StructureConstants,
    Subspace,
    fingerprint,
    rotation_generator,
    trace_inner,
)
from .tolerances import resolve_tol
from .triples import (
    CartanTriple,
    EnlargementWitness,
    check_leq,
    make_triple,
    pair_indices,
    symmetry_algebra,
)

__all__ = [
    "GeometryReport",
    "Params3D",
    "TransverseSubalgebra",
    "admissible",
    "classify",
    "constant_curvature_triple",
    "enlarge_3d",
    "family_triple",
    "ricci_closed_form",
    "transverse_subalgebra",
    "wedge_form",
    "wedge_pair_table",
]

EUCLIDEAN_SPACE = "euclidean_space"
SPHERE_CROSS_LINE = "sphere_cross_line"
THREE_SPHERE = "three_sphere"


def wedge_form(x, y) -> np.ndarray:
    """Antisymmetric pairing sending (x, y) to the rotation generator of
    their plane: x y^T - y x^T."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.outer(x, y) - np.outer(y, x)


def wedge_pair_table(n: int = 3) -> np.ndarray:
    """Wedge values on basis 2-planes, stacked in pair order."""
    eye = np.eye(n)
    return np.stack([wedge_form(eye[i], eye[j]) for i, j in pair_indices(n)])


@dataclass(frozen=True)
class Params3D:
    """Parameters (a, b, k) of the one-dimensional-isotropy family."""

    a: float
    b: float
    k: float


@dataclass(frozen=True)
class AdmissibilityResult:
    ok: bool
    residuals: dict[str, float]


def admissible(p: Params3D, tol: float | None = None) -> AdmissibilityResult:
    """Constraint surface of the family: a(k + a^2 + b^2) = ab = 0."""
    tol = resolve_tol(tol)
    res = {
        "a*b": abs(p.a * p.b),
        "a*(k+a^2+b^2)": abs(p.a * (p.k + p.a**2 + p.b**2)),
    }
    return AdmissibilityResult(all(v <= tol for v in res.values()), res)


def family_triple(p: Params3D, tol: float | None = None) -> CartanTriple:
    """Build the family triple for any (a, b, k); validity tracks admissibility.

    Isotropy is spanned by the (1,2)-plane rotation; connection values are
    a f13 + b f23 and -b f13 + a f23 on the first two directions, zero on
    the third; the only curvature value is k f12 on the (1,2)-plane.
    """
    f12 = rotation_generator(3, 1, 2)
    f13 = rotation_generator(3, 1, 3)
    f23 = rotation_generator(3, 2, 3)
    g = Subspace.from_matrices([f12])
    conn = np.stack([p.a * f13 + p.b * f23, -p.b * f13 + p.a * f23, np.zeros((3, 3))])
    curv = np.stack([p.k * f12, np.zeros((3, 3)), np.zeros((3, 3))])
    return make_triple(g, conn, curv, tol=tol)


def constant_curvature_triple(c: float, tol: float | None = None) -> CartanTriple:
    """Full-isotropy triple (o(3), 0, c * wedge); valid for every real c.

    c > 0 realizes the round sphere of radius c**-0.5, c = 0 flat space,
    c < 0 hyperbolic space; the isometry algebra is six-dimensional.
    """
    g = Subspace.full_so(3)
    conn = np.zeros((3, 3, 3))
    curv = float(c) * wedge_pair_table(3)
    return make_triple(g, conn, curv, tol=tol)


def ricci_closed_form(p: Params3D, tol: float | None = None) -> tuple[np.ndarray, float]:
    """Ricci eigenvalues {k+b^2, k+b^2, 2b^2} (ascending) and scalar curvature.

    Stated for the a = 0 branch only; a != 0 admissible points have
    constant curvature and belong to the enlargement branch.
    """
    tol = resolve_tol(tol)
    if abs(p.a) > tol:
        raise ValueError(
            "closed-form Ricci applies to the a = 0 branch; "
            "use the constant-curvature branch for a != 0"
        )
    eigs = np.sort(np.array([p.k + p.b**2, p.k + p.b**2, 2 * p.b**2], dtype=float))
    return eigs, float(2 * p.k + 4 * p.b**2)


@dataclass(frozen=True)
class TransverseSubalgebra:
    """Three-dimensional subalgebra of the extended algebra transverse to
    the isotropy line, with the inner product induced by evaluation."""

    generators: np.ndarray          # (3, 4) coordinates in the (xi, e1, e2, e3) basis
    constants: StructureConstants   # brackets in the generator basis
    algebra: AlgebraFingerprint
    metric: np.ndarray              # (3, 3) Gram matrix of the evaluated generators


def transverse_subalgebra(p: Params3D, tol: float | None = None) -> TransverseSubalgebra:
    """Span of e1, e2 and 2b e3 + (k+b^2) xi inside the extended algebra.

    Requires an admissible point with a = 0 and b != 0.  Closure under the
    bracket and transversality to the isotropy line are verified, not
    assumed; the returned metric is the pullback of the Euclidean norm
    through evaluation of the vector parts.
    """
    tol = resolve_tol(tol)
    if not admissible(p, tol).ok:
        raise ValidationError(f"parameters {p} violate the admissibility constraints")
    if abs(p.a) > tol:
        raise ValueError("transverse subalgebra is defined on the a = 0 branch")
    if abs(p.b) <= tol:
        raise ValueError("b = 0 carries no transverse subalgebra of this form")
    alg = symmetry_algebra(family_triple(p, tol=tol), tol=tol)
    c = alg.constants.c
    gens = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [p.k + p.b**2, 0.0, 0.0, 2 * p.b],
    ])
    # transversality: generators plus the isotropy direction span everything
    full = np.vstack([gens, np.eye(4)[0]])
    svals = np.linalg.svd(full, compute_uv=False)
    if svals[-1] <= tol * max(1.0, svals[0]):
        raise ValidationError("generators are not transverse to the isotropy line")
    # closure: brackets of generators expand on the generators
    cs = np.zeros((3, 3, 3))
    worst = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            bracket = np.einsum("dpq,p,q->d", c, gens[i], gens[j])
            sol, *_ = np.linalg.lstsq(gens.T, bracket, rcond=None)
            worst = max(worst, float(np.linalg.norm(gens.T @ sol - bracket)))
            cs[:, i, j] = sol
            cs[:, j, i] = -sol
    if worst > max(tol, 1e-12) * max(1.0, float(np.abs(c).max())):
        raise ValidationError(
            f"transverse generators failed to close under the bracket "
            f"(residual {worst:.3e})"
        )
    constants = StructureConstants(3, cs, worst)
    vector_parts = gens[:, 1:]
    metric = vector_parts @ vector_parts.T
    return TransverseSubalgebra(gens, constants, fingerprint(constants, tol=tol), metric)


def enlarge_3d(t: CartanTriple, tol: float | None = None) -> EnlargementWitness | None:
    """Search for an enlargement of a family triple to full isotropy.

    The only bracket-compatible witness subspace is the full complement of
    the isotropy line: one-dimensional candidates would need a real
    eigenvector of the isotropy action on the complement, which is checked
    (the action is a rotation, so none exists).  The target curvature
    coefficient is forced by the curvature-restriction condition; the full
    order check, including the inclusion-homomorphism test, decides.
    """
    tol = resolve_tol(tol)
    f12 = rotation_generator(3, 1, 2)
    f13 = rotation_generator(3, 1, 3)
    f23 = rotation_generator(3, 2, 3)
    if t.n != 3 or t.isotropy.dim != 1:
        raise ValueError("enlargement search expects a triple with one-dimensional "
                         "isotropy in dimension 3")
    xi = t.isotropy.basis[0]
    coeff = trace_inner(xi, f12)
    if float(np.abs(xi - coeff * f12).max()) > tol:
        raise ValueError("enlargement search expects the isotropy line spanned by "
                         "the (1,2)-plane rotation")
    # one-dimensional candidates: a bracket-compatible line would be a real
    # eigenvector of the isotropy action on the complement
    action = np.zeros((2, 2))
    for col, v in enumerate((f13, f23)):
        bracket = xi @ v - v @ xi
        action[0, col] = trace_inner(bracket, f13)
        action[1, col] = trace_inner(bracket, f23)
    eigvals = np.linalg.eigvals(action)
    if np.abs(eigvals.imag).min() <= tol * max(1.0, float(np.abs(eigvals).max())):
        raise ValidationError(
            "unexpected bracket-compatible line in the complement; "
            "one-dimensional enlargement is not supported"
        )
    witness_sub = Subspace.from_matrices([f13, f23])
    # target curvature coefficient from the curvature-restriction condition
    c_target = trace_inner(t.curvature[0], f12)
    target = constant_curvature_triple(c_target, tol=tol)
    result = check_leq(t, target, witness_sub, tol=tol)
    return result.witness if result.holds else None


@dataclass(frozen=True)
class GeometryReport:
    """Classification verdict for one admissible parameter point."""

    params: Params3D
    admissible: bool
    ricci_eigenvalues: tuple[float, float, float]
    scalar_curvature: float
    positive_sectional: bool
    cartan_sphere: bool
    maximal: bool
    maximal_closed_form: bool
    isometry_dim: int
    topology_label: str
    enlargement: EnlargementWitness | None


def classify(p: Params3D, tol: float | None = None) -> GeometryReport:
    """Full geometry report of an admissible point.

    Positive sectional curvature is equivalent to a positive-definite
    Ricci form on this family; the sphere label comes from the fingerprint
    of the transverse subalgebra (compact Killing form), which also covers
    spheres of non-positive scalar curvature.  Maximality is decided by
    the enlargement search; the classical closed-form predicate
    (b != 0, b^2 != k > -b^2) is reported alongside, never merged.
    """
    tol = resolve_tol(tol)
    adm = admissible(p, tol)
    if not adm.ok:
        raise ValidationError(
            f"parameters (a={p.a}, b={p.b}, k={p.k}) violate the admissibility "
            f"constraints: residuals {adm.residuals}"
        )
    triple = family_triple(p, tol=tol)
    witness = enlarge_3d(triple, tol=tol)

    if abs(p.a) > tol:
        # constant-curvature branch: k = -a^2 < 0, hyperbolic realization
        eigs = np.array([2.0 * p.k] * 3)
        scalar = float(6 * p.k)
        positive_sectional = False
        label = EUCLIDEAN_SPACE
    else:
        eigs, scalar = ricci_closed_form(p, tol=tol)
        positive_sectional = bool(eigs.min() > tol)
        if abs(p.b) > tol:
            transverse = transverse_subalgebra(p, tol=tol)
            compact = transverse.algebra.killing_signature == (0, 3, 0)
            label = THREE_SPHERE if compact else EUCLIDEAN_SPACE
        else:
            label = SPHERE_CROSS_LINE if p.k > tol else EUCLIDEAN_SPACE

    cartan_sphere = bool(
        abs(p.a) <= tol
        and abs(p.b) > tol
        and abs(p.k - p.b**2) > tol
        and p.k > -(p.b**2) + tol
    )
    maximal_closed_form = bool(
        abs(p.b) > tol and abs(p.k - p.b**2) > tol and p.k > -(p.b**2) + tol
    )
    return GeometryReport(
        params=p,
        admissible=True,
        ricci_eigenvalues=tuple(float(v) for v in eigs),
        scalar_curvature=scalar,
        positive_sectional=positive_sectional,
        cartan_sphere=cartan_sphere,
        maximal=witness is None,
        maximal_closed_form=maximal_closed_form,
        isometry_dim=6 if witness is not None else 4,
        topology_label=label,
        enlargement=witness,
    )
