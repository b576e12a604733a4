"""Pure-NumPy implementation of the hot kernels.

These functions are the fallback backend; ``_speedups.pyx`` mirrors the
exact same signatures and semantics.  All matrix stacks are float64; sizes
are desk scale (n <= 6), so per-call overhead, not flop count, dominates.
"""

import numpy as np

SQRT_HALF = np.sqrt(0.5)


def conjugate_stack(mats, q):
    """q^T M q applied to every matrix of the stack (adjoint action of q^{-1})."""
    return np.einsum("ai,kab,bj->kij", q, mats, q)


def act_triple(gbasis, conn, curv, q):
    """Transform triple data arrays by the right action of an orthogonal q.

    gbasis: (d, n, n) isotropy basis; conn: (n, n, n) connection values on
    the basis directions; curv: (n, n, n, n) full antisymmetric curvature
    table.  Values are conjugated by q, input directions are mixed by q.
    """
    g_out = np.einsum("ai,kab,bj->kij", q, gbasis, q)
    conn_cj = np.einsum("ak,pab,bl->pkl", q, conn, q)
    conn_out = np.einsum("pi,pkl->ikl", q, conn_cj)
    curv_cj = np.einsum("ak,pqab,bl->pqkl", q, curv, q)
    curv_out = np.einsum("pi,qj,pqkl->ijkl", q, q, curv_cj)
    return g_out, conn_out, curv_out


def span_projector(onbasis):
    """Projector (n^2 x n^2) onto the span of a trace-orthonormal skew stack.

    Trace-orthonormal basis elements have squared Frobenius norm 2, hence
    the 1/2 weight on the vectorized outer products.
    """
    n = onbasis.shape[-1]
    if len(onbasis) == 0:
        return np.zeros((n * n, n * n))
    v = onbasis.reshape(len(onbasis), n * n)
    return 0.5 * (v.T @ v)


def orbit_residual(g_on, conn, curv, proj_t, conn_t, curv_pairs_t, q, rows, cols):
    """Residual vector between a q-transformed triple and a target.

    g_on is trace-orthonormal (preserved by the action); the target enters
    through its span projector proj_t, connection values conn_t and the
    stacked upper-pair curvature values curv_pairs_t.  The squared norm of
    the result is the squared orbit distance.
    """
    g2, conn2, curv2 = act_triple(g_on, conn, curv, q)
    parts = [
        (span_projector(g2) - proj_t).ravel(),
        SQRT_HALF * (conn2 - conn_t).ravel(),
        SQRT_HALF * (curv2[rows, cols] - curv_pairs_t).ravel(),
    ]
    return np.concatenate(parts)


def jacobi_tensor(c):
    """Cyclic Jacobi sum of the bracket table, indexed [i, j, k, l]."""
    t1 = np.einsum("mjk,iml->ijkl", c, c)
    t2 = np.einsum("mkl,imj->ijkl", c, c)
    t3 = np.einsum("mlj,imk->ijkl", c, c)
    return t1 + t2 + t3


def jacobi_residual_max(c):
    """Worst Jacobi violation over basis triples, Euclidean norm in coordinates."""
    if c.size == 0:
        return 0.0
    s = jacobi_tensor(c)
    return float(np.sqrt((s * s).sum(axis=0)).max())
