# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled friction-integrand kernel.

Same contract as the numpy reference (see _ref.friction_integrand): for each
energy node, form the lesser-self-energy sandwich K = V^-1 Sigma^< V^-H and the
Cauchy diagonal of G^R in the eigenbasis, then contract the four friction
traces and two density traces. The three M x M products per node go through
BLAS zgemm; everything else is O(M^2) scalar work.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()

NAME = "compiled"

ctypedef double complex zdouble

cdef double TWO_PI = 6.283185307179586476925287


cdef inline double _fermi(double x, double beta) nogil:
    cdef double bx = beta * x
    cdef double e
    if bx > 0:
        e = exp(-bx)
        return e / (1.0 + e)
    return 1.0 / (1.0 + exp(bx))


cdef inline void _matmul(zdouble* a, zdouble* b, zdouble* c, int m) nogil:
    # C = A @ B for row-major M x M buffers: compute C^T = B^T A^T in
    # column-major terms, which is exactly the same memory layout.
    cdef zdouble one = 1.0 + 0.0j
    cdef zdouble zero = 0.0 + 0.0j
    zgemm("N", "N", &m, &m, &m, &one, b, &m, a, &m, &zero, c, &m)


def friction_integrand(double[::1] eps, ctx):
    """Evaluate the 6-component integrand at the given energies."""
    cdef zdouble[::1] lam = ctx.lam
    cdef zdouble[:, ::1] vinv = ctx.vinv
    cdef zdouble[:, ::1] vinv_h = ctx.vinv_h
    cdef zdouble[:, ::1] px = ctx.p_x
    cdef zdouble[:, ::1] py = ctx.p_y
    cdef zdouble[:, ::1] qx = ctx.q_x
    cdef zdouble[:, ::1] qy = ctx.q_y
    cdef double[::1] g = ctx.g
    cdef double[::1] s = ctx.s
    cdef double beta = ctx.beta

    cdef int m = lam.shape[0]
    cdef Py_ssize_t n = eps.shape[0]
    out_arr = np.empty((n, 6), dtype=complex)
    cdef zdouble[:, ::1] out = out_arr

    tmp_arr = np.empty((m, m), dtype=complex)
    k_arr = np.empty((m, m), dtype=complex)
    x_arr = np.empty((m, m), dtype=complex)
    zx_arr = np.empty((m, m), dtype=complex)
    zy_arr = np.empty((m, m), dtype=complex)
    d_arr = np.empty(m, dtype=complex)
    d2_arr = np.empty(m, dtype=complex)
    w_arr = np.empty(m, dtype=complex)
    cdef zdouble[:, ::1] tmp = tmp_arr
    cdef zdouble[:, ::1] km = k_arr
    cdef zdouble[:, ::1] xm = x_arr
    cdef zdouble[:, ::1] zxm = zx_arr
    cdef zdouble[:, ::1] zym = zy_arr
    cdef zdouble[::1] d = d_arr
    cdef zdouble[::1] d2 = d2_arr
    cdef zdouble[::1] w = w_arr

    cdef Py_ssize_t e
    cdef int i, j, kk
    cdef double ee
    cdef zdouble txx, txy, tyx, tyy, jx, jy, dk2, xkj
    cdef zdouble minus_i_over_2pi = -1j / TWO_PI

    with nogil:
        for e in range(n):
            ee = eps[e]
            for i in range(m):
                d[i] = 1.0 / (ee - lam[i])
                d2[i] = d[i] * d[i]
                w[i] = 1j * g[i] * _fermi(ee - s[i], beta)
            # K = (V^-1 * w) @ V^-H
            for i in range(m):
                for j in range(m):
                    tmp[i, j] = vinv[i, j] * w[j]
            _matmul(&tmp[0, 0], &vinv_h[0, 0], &km[0, 0], m)
            # X = diag(d) K diag(d*)
            for i in range(m):
                for j in range(m):
                    xm[i, j] = d[i] * km[i, j] * d[j].conjugate()
            _matmul(&qx[0, 0], &xm[0, 0], &zxm[0, 0], m)
            _matmul(&qy[0, 0], &xm[0, 0], &zym[0, 0], m)
            txx = 0
            txy = 0
            tyx = 0
            tyy = 0
            jx = 0
            jy = 0
            for kk in range(m):
                dk2 = d2[kk]
                for j in range(m):
                    txx = txx + px[j, kk] * dk2 * zxm[kk, j]
                    txy = txy + px[j, kk] * dk2 * zym[kk, j]
                    tyx = tyx + py[j, kk] * dk2 * zxm[kk, j]
                    tyy = tyy + py[j, kk] * dk2 * zym[kk, j]
                    xkj = xm[kk, j]
                    jx = jx + px[j, kk] * xkj
                    jy = jy + py[j, kk] * xkj
            out[e, 0] = -txx / TWO_PI
            out[e, 1] = -txy / TWO_PI
            out[e, 2] = -tyx / TWO_PI
            out[e, 3] = -tyy / TWO_PI
            out[e, 4] = jx * minus_i_over_2pi
            out[e, 5] = jy * minus_i_over_2pi

    return out_arr
