# cython: language_level=3
"""Compiled hot kernels; exact mirror of kernels._numpy.

All inputs are C-contiguous float64 arrays at desk scale (n <= 6), so the
win over NumPy is avoiding per-call dispatch overhead in the inner loops
of the orbit search, not vectorization.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

SQRT_HALF = np.sqrt(0.5)
cdef double C_SQRT_HALF = 0.7071067811865476


cdef void _conjugate_one(double[:, :] m, double[:, ::1] q, double[:, ::1] tmp,
                         double[:, :] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t a, i, j
    cdef double acc
    for a in range(n):
        for j in range(n):
            acc = 0.0
            for i in range(n):
                acc += m[a, i] * q[i, j]
            tmp[a, j] = acc
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for a in range(n):
                acc += q[a, i] * tmp[a, j]
            out[i, j] = acc


def conjugate_stack(double[:, :, ::1] mats, double[:, ::1] q):
    """q^T M q applied to every matrix of the stack (adjoint action of q^{-1})."""
    cdef Py_ssize_t k = mats.shape[0], n = mats.shape[1]
    out_arr = np.empty((k, n, n))
    cdef double[:, :, ::1] out = out_arr
    tmp_arr = np.empty((n, n))
    cdef double[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t s
    for s in range(k):
        _conjugate_one(mats[s], q, tmp, out[s], n)
    return out_arr


def act_triple(double[:, :, ::1] gbasis, double[:, :, ::1] conn,
               double[:, :, :, ::1] curv, double[:, ::1] q):
    """Transform triple data arrays by the right action of an orthogonal q.

    Mirrors kernels._numpy.act_triple: values conjugated by q, input
    directions mixed by q.
    """
    cdef Py_ssize_t d = gbasis.shape[0], n = conn.shape[0]
    g_arr = np.empty((d, n, n))
    conn_arr = np.empty((n, n, n))
    curv_arr = np.empty((n, n, n, n))
    cdef double[:, :, ::1] g_out = g_arr
    cdef double[:, :, ::1] conn_out = conn_arr
    cdef double[:, :, :, ::1] curv_out = curv_arr
    tmp_arr = np.empty((n, n))
    cj_conn_arr = np.empty((n, n, n))
    cj_curv_arr = np.empty((n, n, n, n))
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, :, ::1] cj_conn = cj_conn_arr
    cdef double[:, :, :, ::1] cj_curv = cj_curv_arr
    cdef Py_ssize_t s, p, r, i, j, a, b
    cdef double acc
    for s in range(d):
        _conjugate_one(gbasis[s], q, tmp, g_out[s], n)
    for p in range(n):
        _conjugate_one(conn[p], q, tmp, cj_conn[p], n)
    for p in range(n):
        for r in range(n):
            _conjugate_one(curv[p, r], q, tmp, cj_curv[p, r], n)
    for i in range(n):
        for a in range(n):
            for b in range(n):
                acc = 0.0
                for p in range(n):
                    acc += q[p, i] * cj_conn[p, a, b]
                conn_out[i, a, b] = acc
    for i in range(n):
        for j in range(n):
            for a in range(n):
                for b in range(n):
                    acc = 0.0
                    for p in range(n):
                        for r in range(n):
                            acc += q[p, i] * q[r, j] * cj_curv[p, r, a, b]
                    curv_out[i, j, a, b] = acc
    return g_arr, conn_arr, curv_arr


def span_projector(double[:, :, ::1] onbasis):
    """Projector onto the span of a trace-orthonormal skew stack (1/2 weight)."""
    cdef Py_ssize_t k = onbasis.shape[0], n = onbasis.shape[1]
    cdef Py_ssize_t nn = n * n
    out_arr = np.zeros((nn, nn))
    cdef double[:, ::1] out = out_arr
    cdef double[:, ::1] flat
    cdef Py_ssize_t s, u, v
    if k == 0:
        return out_arr
    flat_arr = np.asarray(onbasis).reshape(k, nn)
    flat = flat_arr
    for s in range(k):
        for u in range(nn):
            for v in range(nn):
                out[u, v] += 0.5 * flat[s, u] * flat[s, v]
    return out_arr


def orbit_residual(double[:, :, ::1] g_on, double[:, :, ::1] conn,
                   double[:, :, :, ::1] curv, double[:, ::1] proj_t,
                   double[:, :, ::1] conn_t, double[:, :, ::1] curv_pairs_t,
                   double[:, ::1] q, cnp.intp_t[::1] rows, cnp.intp_t[::1] cols):
    """Residual vector between a q-transformed triple and a target."""
    cdef Py_ssize_t d = g_on.shape[0], n = conn.shape[0]
    cdef Py_ssize_t npairs = rows.shape[0]
    cdef Py_ssize_t nn = n * n
    g2, conn2, curv2 = act_triple(g_on, conn, curv, q)
    cdef double[:, :, ::1] g2v = g2
    cdef double[:, :, ::1] conn2v = conn2
    cdef double[:, :, :, ::1] curv2v = curv2
    out_arr = np.empty(nn * nn + n * nn + npairs * nn)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t s, u, v, i, a, b, p, pos
    cdef double acc
    # projector block
    pos = 0
    for u in range(nn):
        for v in range(nn):
            acc = -proj_t[u, v]
            for s in range(d):
                acc += 0.5 * g2v[s, u // n, u % n] * g2v[s, v // n, v % n]
            out[pos] = acc
            pos += 1
    for i in range(n):
        for a in range(n):
            for b in range(n):
                out[pos] = C_SQRT_HALF * (conn2v[i, a, b] - conn_t[i, a, b])
                pos += 1
    for p in range(npairs):
        for a in range(n):
            for b in range(n):
                out[pos] = C_SQRT_HALF * (curv2v[rows[p], cols[p], a, b] - curv_pairs_t[p, a, b])
                pos += 1
    return out_arr


def jacobi_residual_max(double[:, :, ::1] c):
    """Worst Jacobi violation over basis triples, Euclidean norm in coordinates."""
    cdef Py_ssize_t m = c.shape[0]
    if m == 0:
        return 0.0
    cdef Py_ssize_t i, j, k, l, mm
    cdef double best = 0.0, total, comp
    for j in range(m):
        for k in range(m):
            for l in range(m):
                total = 0.0
                for i in range(m):
                    comp = 0.0
                    for mm in range(m):
                        comp += c[mm, j, k] * c[i, mm, l]
                        comp += c[mm, k, l] * c[i, mm, j]
                        comp += c[mm, l, j] * c[i, mm, k]
                    total += comp * comp
                if total > best:
                    best = total
    return sqrt(best)
