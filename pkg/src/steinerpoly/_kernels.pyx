# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-node kernels.

Every function here has a numpy twin in :mod:`steinerpoly._kernels_py` with
the same signature and algorithm; :mod:`steinerpoly.kernels` picks one at
import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot

cnp.import_array()

cdef enum:
    MAX_SWEEPS = 60


def restrict_hessians(double[:, :, ::1] H, double[:, ::1] dirs):
    """Restrict full Hessians to the tangent spaces of `dirs`.

    Returns an ``(N, n-1, n-1)`` array ``B^T H B`` where ``B`` is the
    Householder tangent frame of each direction.
    """
    cdef Py_ssize_t N = H.shape[0], n = H.shape[1]
    cdef Py_ssize_t k, i, j, m = n - 1
    cdef double s, alpha, vi
    cdef double[::1] v = np.empty(n)
    cdef double[::1] w = np.empty(n)
    out_arr = np.empty((N, m, m))
    cdef double[:, :, ::1] out = out_arr
    for k in range(N):
        for i in range(n):
            v[i] = dirs[k, i]
        if dirs[k, n - 1] > 0:
            v[n - 1] += 1.0
        else:
            for i in range(n):
                v[i] = -v[i]
            v[n - 1] += 1.0
        s = 0.0
        for i in range(n):
            s += v[i] * v[i]
        alpha = 0.0
        for i in range(n):
            vi = 0.0
            for j in range(n):
                vi += H[k, i, j] * v[j]
            w[i] = vi
            alpha += v[i] * vi
        for i in range(m):
            for j in range(m):
                out[k, i, j] = (H[k, i, j]
                                - 2.0 / s * (v[i] * w[j] + w[i] * v[j])
                                + 4.0 * alpha / (s * s) * v[i] * v[j])
    return out_arr


cdef void _jacobi(double[:, ::1] a, Py_ssize_t m, double[::1] ev) noexcept nogil:
    cdef Py_ssize_t p, q, r, sweep
    cdef double off, scale, app, aqq, apq, theta, t, c, s, arp, arq
    scale = 0.0
    for p in range(m):
        for q in range(m):
            scale += a[p, q] * a[p, q]
    scale = sqrt(scale)
    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(m):
            for q in range(p + 1, m):
                off += a[p, q] * a[p, q]
        if sqrt(off) <= 1e-15 * scale or off == 0.0:
            break
        for p in range(m):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for r in range(m):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - s * arq
                    a[r, q] = s * arp + c * arq
                for r in range(m):
                    arp = a[p, r]
                    arq = a[q, r]
                    a[p, r] = c * arp - s * arq
                    a[q, r] = s * arp + c * arq
    for p in range(m):
        ev[p] = a[p, p]


cdef void _sort_small(double[::1] ev, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double x
    for i in range(1, m):
        x = ev[i]
        j = i - 1
        while j >= 0 and ev[j] > x:
            ev[j + 1] = ev[j]
            j -= 1
        ev[j + 1] = x


def sym_eigvals(double[:, :, ::1] M):
    """Ascending eigenvalues of a stack of symmetric matrices.

    Closed form for 1x1 and 2x2, cyclic Jacobi rotations otherwise.
    """
    cdef Py_ssize_t N = M.shape[0], m = M.shape[1]
    cdef Py_ssize_t k, i, j
    cdef double mean, rad
    out_arr = np.empty((N, m))
    cdef double[:, ::1] out = out_arr
    cdef double[:, ::1] work = np.empty((m, m))
    for k in range(N):
        if m == 1:
            out[k, 0] = M[k, 0, 0]
        elif m == 2:
            mean = 0.5 * (M[k, 0, 0] + M[k, 1, 1])
            rad = hypot(0.5 * (M[k, 0, 0] - M[k, 1, 1]), M[k, 0, 1])
            out[k, 0] = mean - rad
            out[k, 1] = mean + rad
        else:
            for i in range(m):
                for j in range(m):
                    work[i, j] = M[k, i, j]
            _jacobi(work, m, out[k])
            _sort_small(out[k], m)
    return out_arr


def elementary_symmetric(double[:, ::1] vals):
    """Unnormalized elementary symmetric functions e_0..e_m of each row."""
    cdef Py_ssize_t N = vals.shape[0], m = vals.shape[1]
    cdef Py_ssize_t k, i, j
    cdef double x
    out_arr = np.zeros((N, m + 1))
    cdef double[:, ::1] e = out_arr
    for k in range(N):
        e[k, 0] = 1.0
        for i in range(m):
            x = vals[k, i]
            for j in range(i + 1, 0, -1):
                e[k, j] += x * e[k, j - 1]
    return out_arr


def pairwise_sum(double[::1] x):
    """Sum with a fixed tree: blocks of 8 left to right, then adjacent pairs."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t nb, b, i, lo, hi, half
    cdef double acc
    if n == 0:
        return 0.0
    nb = (n + 7) // 8
    cdef double[::1] buf = np.empty(nb + 1)
    for b in range(nb):
        lo = 8 * b
        hi = lo + 8
        if hi > n:
            hi = n
        acc = x[lo]
        for i in range(lo + 1, hi):
            acc = acc + x[i]
        # padded zeros in the numpy twin: x + 0.0 == x
        for i in range(hi, lo + 8):
            acc = acc + 0.0
        buf[b] = acc
    while nb > 1:
        if nb % 2 == 1:
            buf[nb] = 0.0
            nb += 1
        half = nb // 2
        for i in range(half):
            buf[i] = buf[2 * i] + buf[2 * i + 1]
        nb = half
    return buf[0]
