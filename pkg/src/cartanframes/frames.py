"""Curvature pipelines for invariant frames.

Two independent routes to curvature live here.  The structure-constant
route applies the classical moving-frame formulas verbatim:

    connection coefficients   G[i][j][k] = 1/2 C[i][j][k]
    curvature components      R[i][j][k][r] = -1/4 sum_m C[m][i][j] C[m][k][r]

both valid only for totally antisymmetric constants (bi-invariant metric
in an orthonormal frame).  The Koszul route computes the Levi-Civita
connection of an arbitrary left-invariant metric from

    2 <nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>

and serves as the oracle for the first route; the structure formula's
sign convention differs from geometric sectional curvature by a global
sign, calibrated once on the round-sphere constants and never silently
merged.

Also here: the adapted coframe of the unit 3-sphere, its structure
constants, and the three-parameter family of left-invariant metrics on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotLieAlgebraError, ValidationError
from .liealg import StructureConstants, jacobi_residual
from .tolerances import resolve_tol

__all__ = [
    "ConnectionCoefficients",
    "CurvatureTensor",
    "Coframe3Sphere",
    "KoszulCurvature",
    "MilnorMetric",
    "connection_coefficients",
    "curvature_from_structure",
    "curvature_sign_calibration",
    "koszul_curvature",
    "milnor_metric",
    "ricci_from_curvature",
    "sphere_coframe",
    "sphere_coframe_generators",
    "sphere_structure_constants",
]


def _constants_array(constants) -> np.ndarray:
    if isinstance(constants, StructureConstants):
        return constants.c
    return np.asarray(constants, dtype=float)


@dataclass(frozen=True)
class ConnectionCoefficients:
    """Connection-form coefficients: form (i, j) expanded on the coframe."""

    n: int
    coeffs: np.ndarray  # (n, n, n), skew in the first two indices


@dataclass(frozen=True)
class CurvatureTensor:
    """Curvature components R[i][j][k][r], antisymmetric in (i,j) and (k,r)."""

    n: int
    components: np.ndarray  # (n, n, n, n)


def _total_antisymmetry_residual(c: np.ndarray) -> float:
    return float(np.abs(c + np.swapaxes(c, 0, 1)).max()) if c.size else 0.0


def connection_coefficients(constants, tol: float | None = None) -> ConnectionCoefficients:
    """Connection coefficients of an invariant orthonormal coframe.

    Requires totally antisymmetric constants; otherwise the half-constant
    formula does not produce skew connection forms and the metric is not
    bi-invariant in this frame.
    """
    tol = resolve_tol(tol)
    c = _constants_array(constants)
    res = _total_antisymmetry_residual(c)
    if res > tol:
        raise ValidationError(
            f"formula inapplicable: metric not bi-invariant in this frame "
            f"(total-antisymmetry residual {res:.3e})"
        )
    return ConnectionCoefficients(c.shape[0], 0.5 * c)


def curvature_from_structure(constants, tol: float | None = None) -> CurvatureTensor:
    """Curvature from structure constants, sign convention of the moving frame.

    On the unit-sphere constants the (i,j,i,j) entries come out -1 while
    the geometric sectional curvature is +1; see
    curvature_sign_calibration for the bridge to the Koszul oracle.
    """
    tol = resolve_tol(tol)
    c = _constants_array(constants)
    res = _total_antisymmetry_residual(c)
    if res > tol:
        raise ValidationError(
            f"formula inapplicable: metric not bi-invariant in this frame "
            f"(total-antisymmetry residual {res:.3e})"
        )
    r = -0.25 * np.einsum("mij,mkr->ijkr", c, c)
    return CurvatureTensor(c.shape[0], r)


def ricci_from_curvature(
    tensor: CurvatureTensor, tol: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Ricci contraction sum_i R[i][j][i][k] and its sorted eigenvalues."""
    tol = resolve_tol(tol)
    r = tensor.components
    ric = np.einsum("ijik->jk", r)
    asym = float(np.abs(ric - ric.T).max()) if ric.size else 0.0
    if asym > tol * max(1.0, float(np.abs(ric).max())):
        raise ValidationError(f"tensor symmetries violated (Ricci asymmetry {asym:.3e})")
    ric = 0.5 * (ric + ric.T)
    return ric, np.sort(np.linalg.eigvalsh(ric))


@dataclass(frozen=True)
class KoszulCurvature:
    """Full curvature data of a left-invariant metric in an orthonormal frame."""

    tensor: CurvatureTensor
    sectional: np.ndarray          # (n, n): plane curvatures, zero diagonal
    ricci: np.ndarray              # (n, n) symmetric
    ricci_eigenvalues: np.ndarray  # ascending


def koszul_curvature(constants, metric=None, tol: float | None = None) -> KoszulCurvature:
    """Levi-Civita curvature of a left-invariant metric, the oracle route.

    The basis is orthonormalized against the metric first; the returned
    tensor is indexed so that entry (i, j, i, j) is the sectional curvature
    of the (i, j) coordinate plane of the orthonormalized frame.
    """
    tol = resolve_tol(tol)
    c = _constants_array(constants)
    m = c.shape[0]
    jres = jacobi_residual(c)
    scale = max(1.0, float(np.abs(c).max()) if c.size else 0.0)
    if jres > tol * scale * scale:
        raise NotLieAlgebraError(
            f"structure constants violate the Jacobi identity (residual {jres:.3e})"
        )
    q = np.eye(m) if metric is None else np.asarray(metric, dtype=float)
    if q.shape != (m, m) or np.abs(q - q.T).max() > tol * max(1.0, np.abs(q).max()):
        raise ValueError(f"metric must be a symmetric {m}x{m} matrix")
    eigs, vecs = np.linalg.eigh(0.5 * (q + q.T))
    if eigs.min() <= 0:
        raise ValueError(f"metric is not positive-definite (smallest eigenvalue {eigs.min():.3e})")
    p = vecs @ np.diag(eigs ** -0.5) @ vecs.T        # orthonormalizing change of basis
    p_inv = vecs @ np.diag(eigs ** 0.5) @ vecs.T
    c_on = np.einsum("di,ijk,ja,kb->dab", p_inv, c, p, p)
    # Koszul in the orthonormal frame: lev[d][a][b] = <nabla_{u_a} u_b, u_d>
    #   = 1/2 (c_on[d][a][b] - c_on[a][b][d] + c_on[b][d][a])
    lev = 0.5 * (c_on - np.einsum("abc->cab", c_on) + np.einsum("abc->bca", c_on))
    # lev[d][a][b] = <nabla_{u_a} u_b, u_d>
    term1 = np.einsum("dae,ebc->dcab", lev, lev)
    term2 = np.einsum("dbe,eac->dcab", lev, lev)
    term3 = np.einsum("eab,dec->dcab", c_on, lev)
    r = term1 - term2 - term3  # r[d][c][a][b] = <R(u_a,u_b)u_c, u_d>
    tensor = CurvatureTensor(m, r)
    sectional = np.einsum("ijij->ij", r).copy()
    np.fill_diagonal(sectional, 0.0)
    ric = np.einsum("ijik->jk", r)
    ric = 0.5 * (ric + ric.T)
    return KoszulCurvature(tensor, sectional, ric, np.sort(np.linalg.eigvalsh(ric)))


@dataclass(frozen=True)
class Coframe3Sphere:
    """Adapted coframe of the unit 3-sphere evaluated at a point of R^4.

    Rows are the coefficient vectors of the three invariant 1-forms; at a
    unit point they are orthonormal and orthogonal to the point.
    """

    point: np.ndarray  # (4,)
    rows: np.ndarray   # (3, 4)


def sphere_coframe_generators() -> np.ndarray:
    """Constant skew 4x4 matrices generating the coframe rows as A_i x."""
    a1 = np.array([
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    a2 = np.array([
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ])
    a3 = np.array([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ])
    return np.stack([a1, a2, a3])


def sphere_coframe(x, tol: float | None = None) -> Coframe3Sphere:
    """Evaluate the invariant coframe of the unit 3-sphere at a unit point."""
    tol = resolve_tol(tol)
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError(f"expected a point of R^4, got shape {x.shape}")
    norm_res = abs(float(x @ x) - 1.0)
    if norm_res > tol:
        raise ValueError(f"point is not on the unit sphere (|x|^2 - 1 = {norm_res:.3e})")
    rows = np.einsum("kab,b->ka", sphere_coframe_generators(), x)
    return Coframe3Sphere(x, rows)


@lru_cache(maxsize=1)
def _sphere_constants_cached() -> tuple:
    gens = sphere_coframe_generators()
    basis = gens.reshape(3, -1).T
    c = np.zeros((3, 3, 3))
    worst = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            bracket = (gens[j] @ gens[i] - gens[i] @ gens[j]).ravel()
            sol, *_ = np.linalg.lstsq(basis, bracket, rcond=None)
            worst = max(worst, float(np.linalg.norm(basis @ sol - bracket)))
            c[:, i, j] = sol
            c[:, j, i] = -sol
    return c, worst


def sphere_structure_constants() -> StructureConstants:
    """Structure constants of the dual frame of the unit 3-sphere coframe.

    Brackets of the linear dual vector fields x -> A_i x close exactly on
    the frame; the magnitude pattern (|2| on the alternating entries) is a
    computed output, not an input.
    """
    c, worst = _sphere_constants_cached()
    return StructureConstants(3, c.copy(), worst)


@dataclass(frozen=True)
class MilnorMetric:
    """Left-invariant metric on the 3-sphere in the invariant coframe.

    Three nonzero parameters produce diagonal coefficients
    4/(l2 l3), 4/(l1 l3), 4/(l1 l2); Riemannian iff all three are positive.
    """

    lambdas: tuple[float, float, float]
    coefficients: tuple[float, float, float]


def milnor_metric(lambdas, tol: float | None = None) -> tuple[MilnorMetric, KoszulCurvature]:
    """Build the metric for the given parameters and run the curvature oracle."""
    lams = tuple(float(v) for v in lambdas)
    if len(lams) != 3:
        raise ValueError(f"expected three parameters, got {len(lams)}")
    if any(v == 0 for v in lams):
        raise ValueError("all three parameters must be nonzero")
    l1, l2, l3 = lams
    coeffs = (4.0 / (l2 * l3), 4.0 / (l1 * l3), 4.0 / (l1 * l2))
    if min(coeffs) <= 0:
        raise ValidationError(
            f"not a Riemannian metric: coefficients {tuple(round(v, 6) for v in coeffs)} "
            "are not all positive"
        )
    metric = MilnorMetric(lams, coeffs)
    curv = koszul_curvature(sphere_structure_constants(), np.diag(coeffs), tol=tol)
    return metric, curv


@lru_cache(maxsize=1)
def curvature_sign_calibration() -> float:
    """Global sign relating the structure-formula tensor to the Koszul oracle.

    Computed once on the unit-sphere constants; multiplying the
    structure-formula tensor by this sign reproduces the oracle tensor
    componentwise for every totally antisymmetric input.
    """
    constants = sphere_structure_constants()
    raw = curvature_from_structure(constants).components
    oracle = koszul_curvature(constants).tensor.components
    return float(np.sign(np.vdot(raw, oracle)))
