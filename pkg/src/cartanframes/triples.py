"""Cartan triples: validation, the extended symmetry algebra, the orthogonal
action, the enlargement partial order, and orbit comparison.

A triple consists of an isotropy subalgebra g of o(n), a connection map
sending basis directions of R^n into the orthocomplement of g, and an
antisymmetric g-valued curvature pairing on basis 2-planes.  The bracket
on g + R^n built from these data closes into a Lie algebra exactly when
the triple is valid; the Jacobi residual is the validity measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from . import kernels
from .errors import NotClosedError, ValidationError
from .liealg import (
    AlgebraFingerprint,
    StructureConstants,
    Subspace,
    commutator,
    fingerprint,
    jacobi_residual,
    random_orthogonal,
    skew_from_coords,
    skew_residual,
    trace_norm,
)
from .tolerances import resolve_tol

__all__ = [
    "CartanTriple",
    "CheckResult",
    "EnlargementWitness",
    "LeqResult",
    "OrbitVerdict",
    "SymmetryAlgebra",
    "TripleSignature",
    "ValidationReport",
    "act_orthogonal",
    "canonical_curvature",
    "check_leq",
    "connection_value",
    "curvature_value",
    "invariant_signature",
    "make_triple",
    "orbit_equivalent",
    "pair_indices",
    "signature_distance",
    "symmetry_algebra",
    "torsion",
    "validate_triple",
]


def pair_indices(n: int) -> list[tuple[int, int]]:
    """0-based index pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class CartanTriple:
    """Isotropy subalgebra, connection values, and curvature pairing values.

    connection[i] is the value on the i-th basis direction (a skew matrix
    orthogonal to the isotropy algebra); curvature[p] is the value on the
    p-th basis 2-plane in pair_indices(n) order (a matrix inside the
    isotropy algebra).  The pairing extends to all pairs by antisymmetry.
    ``closed`` is a user-asserted flag reported verbatim, never decided.
    """

    n: int
    isotropy: Subspace
    connection: np.ndarray  # (n, n, n)
    curvature: np.ndarray   # (n(n-1)/2, n, n)
    closed: bool | None = None


def make_triple(
    isotropy: Subspace,
    connection,
    curvature,
    closed: bool | None = None,
    tol: float | None = None,
) -> CartanTriple:
    """Validated constructor enforcing the structural invariants.

    Checks shapes, skewness, that every connection value is orthogonal to
    the isotropy algebra, and that every curvature value lies inside it.
    Mathematical validity (equivariance, Jacobi) is validate_triple's job.
    """
    tol = resolve_tol(tol)
    n = isotropy.n
    conn = np.asarray(connection, dtype=float)
    curv = np.asarray(curvature, dtype=float)
    npairs = n * (n - 1) // 2
    if conn.shape != (n, n, n):
        raise ValidationError(f"connection stack must have shape {(n, n, n)}, got {conn.shape}")
    if curv.shape != (npairs, n, n):
        raise ValidationError(
            f"curvature stack must have shape {(npairs, n, n)}, got {curv.shape}"
        )
    if not (np.isfinite(conn).all() and np.isfinite(curv).all()):
        raise ValidationError("triple entries must be finite")
    for i in range(n):
        res = skew_residual(conn[i])
        if res > tol:
            raise ValidationError(f"connection[{i}] is not skew-symmetric (residual {res:.3e})")
        res = trace_norm(_component_in(conn[i], isotropy))
        if res > tol:
            raise ValidationError(
                f"connection[{i}] is not orthogonal to the isotropy algebra (residual {res:.3e})"
            )
    for p, (i, j) in enumerate(pair_indices(n)):
        res = skew_residual(curv[p])
        if res > tol:
            raise ValidationError(
                f"curvature[({i + 1},{j + 1})] is not skew-symmetric (residual {res:.3e})"
            )
        res = isotropy.membership_residual(curv[p])
        if res > tol:
            raise ValidationError(
                f"curvature[({i + 1},{j + 1})] is not in the span of the isotropy "
                f"algebra (residual {res:.3e})"
            )
    return CartanTriple(n, isotropy, conn, curv, closed)


def _component_in(x: np.ndarray, g: Subspace) -> np.ndarray:
    on = g.orthonormalized()
    if len(on) == 0:
        return np.zeros_like(x)
    coeffs = np.array([-0.5 * np.einsum("ij,ji->", x, b) for b in on])
    return np.einsum("k,kij->ij", coeffs, on)


def curvature_full(t: CartanTriple) -> np.ndarray:
    """Full antisymmetric curvature table, shape (n, n, n, n)."""
    full = np.zeros((t.n, t.n, t.n, t.n))
    for p, (i, j) in enumerate(pair_indices(t.n)):
        full[i, j] = t.curvature[p]
        full[j, i] = -t.curvature[p]
    return full


def connection_value(t: CartanTriple, x) -> np.ndarray:
    """Connection value on an arbitrary vector, by linearity."""
    return np.einsum("i,iab->ab", np.asarray(x, dtype=float), t.connection)


def curvature_value(t: CartanTriple, x, y) -> np.ndarray:
    """Curvature pairing on arbitrary vectors, by bilinearity."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.einsum("i,j,ijab->ab", x, y, curvature_full(t))


def torsion(t: CartanTriple, x, y) -> np.ndarray:
    """Torsion of the canonical connection: Gamma(y) x - Gamma(x) y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return connection_value(t, y) @ x - connection_value(t, x) @ y


def canonical_curvature(t: CartanTriple, x, y) -> np.ndarray:
    """Isotropy-valued curvature of the canonical connection.

    The curvature pairing minus the isotropy component of the commutator
    of the two connection values.
    """
    gx = connection_value(t, x)
    gy = connection_value(t, y)
    return curvature_value(t, x, y) - _component_in(commutator(gx, gy), t.isotropy)


def _bracket(t: CartanTriple, u: tuple[np.ndarray, np.ndarray], v: tuple[np.ndarray, np.ndarray]):
    """Bracket of two elements of the extended algebra g + R^n.

    Elements are (skew matrix, vector) pairs; the matrix-matrix part is the
    commutator, matrix-vector parts act as endomorphisms, and the
    vector-vector part contributes minus torsion and minus the canonical
    curvature.
    """
    xi, x = u
    eta, y = v
    mat = commutator(xi, eta) - canonical_curvature(t, x, y)
    vec = xi @ y - eta @ x - torsion(t, x, y)
    return mat, vec


@dataclass(frozen=True)
class SymmetryAlgebra:
    """The Lie algebra g + R^n of a triple, in the basis (g basis, e_1..e_n)."""

    triple: CartanTriple
    constants: StructureConstants
    torsion_table: np.ndarray          # (n, n, n): vector T(e_i, e_j)
    curvature_part_table: np.ndarray   # (n, n, n, n): matrix-valued table
    jacobi: float

    @property
    def isotropy_dim(self) -> int:
        return self.triple.isotropy.dim

    @property
    def dim(self) -> int:
        return self.triple.isotropy.dim + self.triple.n


def symmetry_algebra(t: CartanTriple, tol: float | None = None) -> SymmetryAlgebra:
    """Assemble the bracket table of g + R^n and record its Jacobi residual.

    Raises NotClosedError when the isotropy basis itself is not a
    subalgebra; any other defect of the triple shows up as a nonzero
    Jacobi residual rather than an exception.
    """
    tol = resolve_tol(tol)
    n = t.n
    d = t.isotropy.dim
    m = d + n
    c = np.zeros((m, m, m))
    gbasis = t.isotropy.basis
    if d:
        a = gbasis.reshape(d, -1).T
        for p in range(d):
            for q in range(p + 1, d):
                br = commutator(gbasis[p], gbasis[q]).ravel()
                sol, *_ = np.linalg.lstsq(a, br, rcond=None)
                res = float(np.linalg.norm(a @ sol - br))
                if res > tol:
                    raise NotClosedError(
                        f"the isotropy basis is not a subalgebra (bracket residual {res:.3e})",
                        residual=res,
                    )
                c[:d, p, q] = sol
                c[:d, q, p] = -sol
        for p in range(d):
            for i in range(n):
                action = gbasis[p] @ np.eye(n)[:, i]
                c[d:, p, d + i] = action
                c[d:, d + i, p] = -action
    tors = np.zeros((n, n, n))
    curv_part = np.zeros((n, n, n, n))
    basis_vectors = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            tv = torsion(t, basis_vectors[i], basis_vectors[j])
            cv = canonical_curvature(t, basis_vectors[i], basis_vectors[j])
            tors[i, j], tors[j, i] = tv, -tv
            curv_part[i, j], curv_part[j, i] = cv, -cv
            c[d:, d + i, d + j] = -tv
            c[d:, d + j, d + i] = tv
            if d:
                coeffs = t.isotropy.coords_of(cv)
                c[:d, d + i, d + j] = -coeffs
                c[:d, d + j, d + i] = coeffs
    constants = StructureConstants(m, c)
    return SymmetryAlgebra(t, constants, tors, curv_part, jacobi_residual(constants))


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    tolerance: float

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def worst(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def residual(self, name: str) -> float:
        for c in self.checks:
            if c.name == name:
                return c.residual
        raise KeyError(name)


def validate_triple(t: CartanTriple, tol: float | None = None) -> ValidationReport:
    """Run every validity check of a triple and report named residuals.

    Checks: closure of the isotropy algebra, membership residuals of the
    connection and curvature values, equivariance of both maps under the
    isotropy action (on basis pairs, sufficient by bilinearity), and the
    Jacobi residual of the extended algebra.  Valid iff all pass.
    """
    tol = resolve_tol(tol)
    n = t.n
    gbasis = t.isotropy.basis
    checks: list[CheckResult] = []

    closure = 0.0
    if t.isotropy.dim >= 2:
        a = gbasis.reshape(len(gbasis), -1).T
        for p in range(len(gbasis)):
            for q in range(p + 1, len(gbasis)):
                br = commutator(gbasis[p], gbasis[q]).ravel()
                sol, *_ = np.linalg.lstsq(a, br, rcond=None)
                closure = max(closure, float(np.linalg.norm(a @ sol - br)))
    checks.append(CheckResult("isotropy_closed", closure, closure <= tol))

    conn_member = max(
        (trace_norm(_component_in(t.connection[i], t.isotropy)) for i in range(n)),
        default=0.0,
    )
    checks.append(CheckResult("connection_in_complement", conn_member, conn_member <= tol))

    curv_member = max(
        (t.isotropy.membership_residual(v) for v in t.curvature), default=0.0
    )
    checks.append(CheckResult("curvature_in_isotropy", curv_member, curv_member <= tol))

    basis_vectors = np.eye(n)
    conn_eq = 0.0
    for xi in gbasis:
        for i in range(n):
            lhs = connection_value(t, xi @ basis_vectors[i])
            rhs = commutator(xi, t.connection[i])
            conn_eq = max(conn_eq, trace_norm(lhs - rhs))
    checks.append(CheckResult("connection_equivariant", conn_eq, conn_eq <= tol))

    curv_eq = 0.0
    for xi in gbasis:
        for i, j in pair_indices(n):
            lhs = curvature_value(t, xi @ basis_vectors[i], basis_vectors[j])
            lhs = lhs + curvature_value(t, basis_vectors[i], xi @ basis_vectors[j])
            rhs = commutator(xi, curvature_value(t, basis_vectors[i], basis_vectors[j]))
            curv_eq = max(curv_eq, trace_norm(lhs - rhs))
    checks.append(CheckResult("curvature_equivariant", curv_eq, curv_eq <= tol))

    try:
        jac = symmetry_algebra(t, tol=tol).jacobi
    except NotClosedError as exc:
        jac = exc.residual
    checks.append(CheckResult("jacobi", jac, jac <= tol))

    return ValidationReport(tuple(checks), tol)


def act_orthogonal(t: CartanTriple, q: np.ndarray, tol: float | None = None) -> CartanTriple:
    """Right action of an orthogonal matrix on a triple.

    The isotropy algebra and all values are conjugated into the rotated
    frame and input directions are pulled through q; validity and every
    invariant are preserved.  Raises ValueError for a non-orthogonal q.
    """
    tol = resolve_tol(tol)
    q = np.asarray(q, dtype=float)
    if q.shape != (t.n, t.n):
        raise ValueError(f"expected a {t.n}x{t.n} matrix, got {q.shape}")
    ortho_res = float(np.abs(q.T @ q - np.eye(t.n)).max())
    if ortho_res > max(tol, 1e-12):
        raise ValueError(f"matrix is not orthogonal (residual {ortho_res:.3e})")
    g2, conn2, curv_full2 = kernels.act_triple(
        np.ascontiguousarray(t.isotropy.basis),
        np.ascontiguousarray(t.connection),
        np.ascontiguousarray(curvature_full(t)),
        np.ascontiguousarray(q),
    )
    rows = [i for i, _ in pair_indices(t.n)]
    cols = [j for _, j in pair_indices(t.n)]
    return CartanTriple(t.n, Subspace(t.n, g2), conn2, curv_full2[rows, cols], t.closed)


@dataclass(frozen=True)
class EnlargementWitness:
    """Evidence that one triple enlarges to another through a subspace."""

    a_basis: Subspace
    embedding_residual: float
    enlarged: CartanTriple


@dataclass(frozen=True)
class LeqResult:
    holds: bool
    witness: EnlargementWitness | None
    checks: tuple[CheckResult, ...]


def check_leq(
    t1: CartanTriple, t2: CartanTriple, a: Subspace, tol: float | None = None
) -> LeqResult:
    """Decide whether t1 enlarges to t2 through the subspace a.

    Four conditions, all at tolerance: the isotropy algebra of t2 splits as
    that of t1 plus a; the t2-complement component of each t1 connection
    value reproduces the t2 connection; the t1-isotropy component of each
    t2 curvature value reproduces the t1 curvature; and the canonical
    inclusion of the extended algebras (shifting vectors by the a-component
    of the connection) is a Lie algebra homomorphism.
    """
    tol = resolve_tol(tol)
    if t1.n != t2.n:
        raise ValueError(f"dimension mismatch: {t1.n} vs {t2.n}")
    n = t1.n
    for idx, v in enumerate(a.basis):
        res = trace_norm(_component_in(v, t1.isotropy))
        if res > tol:
            raise ValueError(
                f"witness basis[{idx}] is not orthogonal to the smaller isotropy "
                f"algebra (residual {res:.3e})"
            )
    checks: list[CheckResult] = []

    # (i) span(g2) = span(g1) + span(a), dimensions adding up
    dim_defect = abs(t2.isotropy.dim - t1.isotropy.dim - a.dim)
    combined = np.concatenate([t1.isotropy.basis, a.basis]) if (t1.isotropy.dim + a.dim) else \
        np.zeros((0, n, n))
    p_sum = kernels.span_projector(Subspace(n, combined).orthonormalized()) \
        if len(combined) else np.zeros((n * n, n * n))
    p_two = kernels.span_projector(t2.isotropy.orthonormalized()) \
        if t2.isotropy.dim else np.zeros((n * n, n * n))
    span_res = float(np.abs(p_sum - p_two).max()) + float(dim_defect)
    checks.append(CheckResult("isotropy_splits", span_res, span_res <= tol))

    # (ii) connection restriction: t2-complement component of each t1 value
    conn_res = 0.0
    for i in range(n):
        perp2 = t1.connection[i] - _component_in(t1.connection[i], t2.isotropy)
        conn_res = max(conn_res, trace_norm(perp2 - t2.connection[i]))
    checks.append(CheckResult("connection_restricts", conn_res, conn_res <= tol))

    # (iii) curvature restriction: t1-isotropy component of each t2 value
    curv_res = 0.0
    for p in range(len(t1.curvature)):
        part = _component_in(t2.curvature[p], t1.isotropy)
        curv_res = max(curv_res, trace_norm(part - t1.curvature[p]))
    checks.append(CheckResult("curvature_restricts", curv_res, curv_res <= tol))

    # (iv) the canonical inclusion is a Lie algebra homomorphism
    def conn_a(x):
        return _component_in(connection_value(t1, x), a)

    def iota(el):
        xi, x = el
        return xi + conn_a(x), x.copy()

    basis_elements = [(xi.copy(), np.zeros(n)) for xi in t1.isotropy.basis]
    basis_elements += [(np.zeros((n, n)), e) for e in np.eye(n)]
    hom_res = 0.0
    for p in range(len(basis_elements)):
        for q in range(p + 1, len(basis_elements)):
            mat1, vec1 = _bracket(t1, basis_elements[p], basis_elements[q])
            mat1, vec1 = iota((mat1, vec1))
            mat2, vec2 = _bracket(t2, iota(basis_elements[p]), iota(basis_elements[q]))
            dev = np.sqrt(trace_norm(mat1 - mat2) ** 2 + float(np.dot(vec1 - vec2, vec1 - vec2)))
            hom_res = max(hom_res, float(dev))
    checks.append(CheckResult("inclusion_homomorphism", hom_res, hom_res <= tol))

    holds = all(c.passed for c in checks)
    witness = EnlargementWitness(a, hom_res, t2) if holds else None
    return LeqResult(holds, witness, tuple(checks))


@dataclass(frozen=True)
class TripleSignature:
    """Orthogonal-action invariants used to separate orbits."""

    n: int
    isotropy_dim: int
    algebra: AlgebraFingerprint
    connection_energy: float
    curvature_energy: float
    stretch_spectrum: tuple[float, ...]


def invariant_signature(t: CartanTriple, tol: float | None = None) -> TripleSignature:
    """Invariant tuple of a valid triple; every entry is constant along orbits."""
    alg = symmetry_algebra(t, tol=tol)
    fp = fingerprint(alg.constants, tol=tol)
    conn_energy = float(sum(trace_norm(c) ** 2 for c in t.connection))
    curv_energy = float(sum(trace_norm(v) ** 2 for v in t.curvature))
    stretch = np.einsum("iab,iac->bc", t.connection, t.connection)
    spectrum = tuple(float(x) for x in np.linalg.eigvalsh(stretch))
    return TripleSignature(t.n, t.isotropy.dim, fp, conn_energy, curv_energy, spectrum)


def signature_distance(s1: TripleSignature, s2: TripleSignature) -> float:
    """Max deviation between two signatures; inf if discrete parts differ."""
    if (s1.n, s1.isotropy_dim, s1.algebra) != (s2.n, s2.isotropy_dim, s2.algebra):
        return float("inf")
    devs = [abs(s1.connection_energy - s2.connection_energy),
            abs(s1.curvature_energy - s2.curvature_energy)]
    devs += [abs(x - y) for x, y in zip(s1.stretch_spectrum, s2.stretch_spectrum)]
    return max(devs)


@dataclass(frozen=True)
class OrbitVerdict:
    kind: str  # "distinct" | "equivalent" | "undecided"
    witness: np.ndarray | None
    residual: float


SIGNATURE_GATE = 1e-6  # coarse screen; only ever used to declare "distinct"


def orbit_equivalent(
    t1: CartanTriple,
    t2: CartanTriple,
    seed: int = 0,
    starts: int = 24,
    tol: float | None = None,
) -> OrbitVerdict:
    """Decide whether two triples lie on the same orthogonal orbit.

    Signatures differing beyond the gate settle "distinct" immediately.
    Otherwise a seeded multi-start Levenberg-Marquardt search over O(n)
    (both components) hunts for a witness; "equivalent" is only ever
    reported together with a numeric witness whose residual passes the
    tolerance, anything else stays "undecided".
    """
    tol = resolve_tol(tol)
    if t1.n != t2.n:
        raise ValueError(f"dimension mismatch: {t1.n} vs {t2.n}")
    n = t1.n
    if signature_distance(invariant_signature(t1), invariant_signature(t2)) > SIGNATURE_GATE:
        return OrbitVerdict("distinct", None, float("inf"))

    g_on = np.ascontiguousarray(t1.isotropy.orthonormalized())
    conn1 = np.ascontiguousarray(t1.connection)
    curv1 = np.ascontiguousarray(curvature_full(t1))
    proj2 = np.ascontiguousarray(kernels.span_projector(t2.isotropy.orthonormalized()))
    conn2 = np.ascontiguousarray(t2.connection)
    curv2 = np.ascontiguousarray(t2.curvature)
    rows = np.array([i for i, _ in pair_indices(n)], dtype=np.intp)
    cols = np.array([j for _, j in pair_indices(n)], dtype=np.intp)

    def residual_for(q):
        return kernels.orbit_residual(
            g_on, conn1, curv1, proj2, conn2, curv2, np.ascontiguousarray(q), rows, cols
        )

    rng = np.random.default_rng(seed)
    reflection = np.diag([-1.0] + [1.0] * (n - 1))
    seeds = [np.eye(n), reflection]
    while len(seeds) < max(2, starts):
        seeds.append(random_orthogonal(n, rng))

    best_q = None
    best_res = float("inf")
    nfree = n * (n - 1) // 2
    for q0 in seeds:
        def fun(w, q0=q0):
            return residual_for(q0 @ scipy.linalg.expm(skew_from_coords(w, n)))

        out = scipy.optimize.least_squares(
            fun, np.zeros(nfree), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15,
        )
        res = float(np.linalg.norm(out.fun))
        if res < best_res:
            best_res = res
            best_q = q0 @ scipy.linalg.expm(skew_from_coords(out.x, n))
        if best_res <= tol:
            break

    if best_res <= tol and best_q is not None:
        return OrbitVerdict("equivalent", best_q, best_res)
    return OrbitVerdict("undecided", None, best_res)
