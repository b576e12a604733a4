"""Dense linear algebra over gl(n) and o(n).

Canonical matrix units and rotation generators, the trace inner product
(-1/2 tr(XY), positive definite on skew matrices and proportional to the
Killing form of o(n) for n >= 3), orthogonal splittings, structure
constants of closed matrix bases, Jacobi residuals, and basis-free
isomorphism fingerprints of small Lie algebras.

Index conventions: constructor arguments are 1-based to match the usual
classification-table conventions; matrices act on column vectors, so the
endomorphism sending the i-th basis vector to the j-th has its single
nonzero entry in row j, column i.  Everything is exact-at-tolerance; rank
decisions go through singular values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotClosedError, NotLieAlgebraError, ValidationError
from .kernels import jacobi_residual_max
from .tolerances import EIGENVALUE_TOL, resolve_tol

__all__ = [
    "AlgebraFingerprint",
    "StructureConstants",
    "Subspace",
    "commutator",
    "fingerprint",
    "jacobi_residual",
    "matrix_unit",
    "ortho_complement",
    "project",
    "random_orthogonal",
    "rotation_generator",
    "skew_from_coords",
    "so_basis",
    "so_pairs",
    "structure_constants",
    "trace_inner",
    "trace_norm",
]


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    """Endomorphism of R^n sending the i-th basis vector to the j-th (1-based).

    The returned n x n matrix has a single 1 in row j, column i.
    """
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"indices must lie in 1..{n}, got ({i}, {j})")
    m = np.zeros((n, n))
    m[j - 1, i - 1] = 1.0
    return m


def rotation_generator(n: int, j: int, i: int) -> np.ndarray:
    """Generator of rotations in the (j, i) coordinate plane, 1 <= j < i <= n.

    Sends e_j to -e_i and e_i to e_j.  The set over all pairs j < i is a
    trace-orthonormal basis of the skew-symmetric matrices o(n).
    """
    if not (1 <= j < i <= n):
        raise ValueError(f"plane indices must satisfy 1 <= j < i <= {n}, got ({j}, {i})")
    return matrix_unit(n, i, j) - matrix_unit(n, j, i)


def so_pairs(n: int) -> list[tuple[int, int]]:
    """Plane index pairs (j, i), j < i, in lexicographic order (1-based)."""
    return [(j, i) for j in range(1, n + 1) for i in range(j + 1, n + 1)]


def so_basis(n: int) -> np.ndarray:
    """Stack of all rotation generators of o(n), shape (n(n-1)/2, n, n)."""
    return np.stack([rotation_generator(n, j, i) for j, i in so_pairs(n)])


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix commutator AB - BA."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def trace_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Inner product -1/2 tr(AB); positive definite on skew matrices."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace_inner needs equal square shapes, got {a.shape} and {b.shape}")
    return -0.5 * float(np.einsum("ij,ji->", a, b))


def trace_norm(a: np.ndarray) -> float:
    """Norm induced by trace_inner (only meaningful on skew matrices)."""
    return float(np.sqrt(max(0.0, trace_inner(a, a))))


def skew_residual(a: np.ndarray) -> float:
    """How far a matrix is from being skew-symmetric (max-entry of A + A^T)."""
    a = np.asarray(a, dtype=float)
    return float(np.abs(a + a.T).max()) if a.size else 0.0


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (both components of O(n))."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def skew_from_coords(w: np.ndarray, n: int) -> np.ndarray:
    """Skew matrix with coordinates w in the rotation-generator basis order."""
    w = np.asarray(w, dtype=float)
    m = np.zeros((n, n))
    for wp, (j, i) in zip(w, so_pairs(n)):
        m[j - 1, i - 1] += wp
        m[i - 1, j - 1] -= wp
    return m


@dataclass(frozen=True)
class Subspace:
    """A subspace of the skew-symmetric matrices o(n), held by a basis stack."""

    n: int
    basis: np.ndarray  # (dim, n, n)

    @classmethod
    def from_matrices(cls, mats, n: int | None = None, tol: float | None = None) -> "Subspace":
        """Validated constructor: every element skew, basis independent at tolerance."""
        tol = resolve_tol(tol)
        mats = [np.asarray(m, dtype=float) for m in mats]
        if not mats:
            if n is None:
                raise ValueError("an empty basis needs an explicit matrix dimension n")
            return cls(n, np.zeros((0, n, n)))
        size = mats[0].shape[0]
        if n is not None and n != size:
            raise ValueError(f"basis matrices are {size}x{size}, expected n={n}")
        stack = np.stack(mats)
        if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
            raise ValueError(f"expected a stack of square matrices, got shape {stack.shape}")
        if not np.isfinite(stack).all():
            raise ValidationError("basis entries must be finite")
        for idx, m in enumerate(stack):
            res = skew_residual(m)
            if res > tol:
                raise ValidationError(
                    f"basis[{idx}] is not skew-symmetric (residual {res:.3e})"
                )
        svals = np.linalg.svd(stack.reshape(len(stack), -1), compute_uv=False)
        if svals.size and svals[-1] <= tol * max(1.0, svals[0]):
            raise ValidationError(
                f"basis is not linearly independent (smallest singular value {svals[-1]:.3e})"
            )
        return cls(size, stack)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((0, n, n)))

    @classmethod
    def full_so(cls, n: int) -> "Subspace":
        return cls(n, so_basis(n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return self.n * (self.n - 1) // 2

    def orthonormalized(self) -> np.ndarray:
        """Trace-orthonormal basis stack spanning the same subspace."""
        if self.dim == 0:
            return self.basis
        vecs = self.basis.reshape(self.dim, -1)
        _, svals, vt = np.linalg.svd(vecs, full_matrices=False)
        keep = vt[: np.sum(svals > 1e-13 * max(1.0, svals[0]))]
        # rows of vt are unit in the vec dot product; trace norm needs sqrt(2)
        return (np.sqrt(2.0) * keep).reshape(-1, self.n, self.n)

    def coords_of(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of x on the stored (not necessarily orthonormal) basis."""
        if self.dim == 0:
            return np.zeros(0)
        a = self.basis.reshape(self.dim, -1).T
        sol, *_ = np.linalg.lstsq(a, np.asarray(x, dtype=float).ravel(), rcond=None)
        return sol

    def membership_residual(self, x: np.ndarray) -> float:
        """Trace-norm distance from x to this subspace."""
        _, perp = _split(np.asarray(x, dtype=float), self)
        return trace_norm(perp)


def _split(x: np.ndarray, g: Subspace) -> tuple[np.ndarray, np.ndarray]:
    on = g.orthonormalized()
    if len(on) == 0:
        return np.zeros_like(x), x.copy()
    coeffs = np.array([trace_inner(x, b) for b in on])
    xg = np.einsum("k,kij->ij", coeffs, on)
    return xg, x - xg


def project(x: np.ndarray, g: Subspace, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Split a skew matrix as (component in g, component orthogonal to g).

    The two parts recombine to x exactly; orthogonality is with respect to
    trace_inner.  Raises ValidationError for a non-skew input.
    """
    tol = resolve_tol(tol)
    x = np.asarray(x, dtype=float)
    res = skew_residual(x)
    if res > tol:
        raise ValidationError(f"matrix is not skew-symmetric (residual {res:.3e})")
    return _split(x, g)


def ortho_complement(g: Subspace) -> Subspace:
    """Orthocomplement of g inside o(n) under trace_inner, orthonormal basis.

    dim(g) + dim(result) = n(n-1)/2.
    """
    full = so_basis(g.n)
    if g.dim == 0:
        return Subspace(g.n, full)
    coords = np.array([[trace_inner(x, f) for f in full] for x in g.basis])
    null = scipy.linalg.null_space(coords)
    mats = np.einsum("pc,pij->cij", null, full)
    return Subspace(g.n, mats)


@dataclass(frozen=True)
class StructureConstants:
    """Bracket table of a finite-dimensional real algebra in a chosen basis.

    c[i, j, k] is the coefficient of the i-th basis element in the bracket
    of the j-th and k-th; antisymmetric in (j, k).
    """

    dim: int
    c: np.ndarray  # (dim, dim, dim)
    fit_residual: float = 0.0


def structure_constants(basis, tol: float | None = None) -> StructureConstants:
    """Expand pairwise commutators of a matrix basis on that basis.

    Raises NotClosedError (carrying the worst residual) when some bracket
    escapes the span by more than the tolerance.
    """
    tol = resolve_tol(tol)
    mats = np.stack([np.asarray(m, dtype=float) for m in basis])
    m = len(mats)
    c = np.zeros((m, m, m))
    if m < 2:
        return StructureConstants(m, c, 0.0)
    a = mats.reshape(m, -1).T
    pairs = [(j, k) for j in range(m) for k in range(j + 1, m)]
    rhs = np.stack([commutator(mats[j], mats[k]).ravel() for j, k in pairs], axis=1)
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    resid = np.linalg.norm(a @ sol - rhs, axis=0)
    worst = float(resid.max()) if resid.size else 0.0
    if worst > tol:
        raise NotClosedError(
            f"basis is not closed under the commutator (worst residual {worst:.3e})",
            residual=worst,
        )
    for col, (j, k) in enumerate(pairs):
        c[:, j, k] = sol[:, col]
        c[:, k, j] = -sol[:, col]
    return StructureConstants(m, c, worst)


def _constants_array(constants) -> np.ndarray:
    if isinstance(constants, StructureConstants):
        return constants.c
    return np.asarray(constants, dtype=float)


def jacobi_residual(constants) -> float:
    """Worst violation of the Jacobi identity over basis triples.

    Zero (at tolerance) exactly when the table defines a Lie algebra.
    """
    c = _constants_array(constants)
    return jacobi_residual_max(np.ascontiguousarray(c))


@dataclass(frozen=True)
class AlgebraFingerprint:
    """Isomorphism-invariant tuple identifying small Lie algebras.

    Killing signature is (positive, negative, zero) eigenvalue counts of
    trace(ad_x ad_y); center and derived dimensions come from rank
    computations; unimodular means every ad_x is traceless.
    """

    dim: int
    killing_signature: tuple[int, int, int]
    center_dim: int
    derived_dim: int
    unimodular: bool


def _rank(matrix: np.ndarray, tol: float) -> int:
    if matrix.size == 0:
        return 0
    svals = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(svals > tol * max(1.0, svals[0])))


def fingerprint(constants, tol: float | None = None) -> AlgebraFingerprint:
    """Fingerprint of a Lie algebra given through its structure constants.

    Requires the Jacobi residual of the input to pass at tolerance.
    """
    tol = resolve_tol(tol)
    c = _constants_array(constants)
    m = c.shape[0] if c.ndim == 3 else 0
    scale = max(1.0, float(np.abs(c).max()) if c.size else 0.0)
    jresid = jacobi_residual(c)
    if jresid > tol * scale * scale:
        raise NotLieAlgebraError(
            f"structure constants violate the Jacobi identity (residual {jresid:.3e})"
        )
    if m == 0:
        return AlgebraFingerprint(0, (0, 0, 0), 0, 0, True)
    killing = np.einsum("iam,mbi->ab", c, c)
    killing = 0.5 * (killing + killing.T)
    eigs = np.linalg.eigvalsh(killing)
    thresh = EIGENVALUE_TOL * max(1.0, float(np.abs(eigs).max()))
    n_plus = int(np.sum(eigs > thresh))
    n_minus = int(np.sum(eigs < -thresh))
    signature = (n_plus, n_minus, m - n_plus - n_minus)
    # center: kernel of x -> ad_x
    ad_map = np.moveaxis(c, 1, 0).reshape(m, m * m).T
    center_dim = m - _rank(ad_map, tol)
    # derived algebra: span of all bracket values
    cols = [c[:, j, k] for j in range(m) for k in range(j + 1, m)]
    derived_dim = _rank(np.stack(cols, axis=1), tol) if cols else 0
    traces = np.einsum("iai->a", c)
    unimodular = bool(np.abs(traces).max() <= tol * scale) if traces.size else True
    return AlgebraFingerprint(m, signature, center_dim, derived_dim, unimodular)
