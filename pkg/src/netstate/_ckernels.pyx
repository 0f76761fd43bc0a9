# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()


def lag_products(s):
    cdef double complex[:, ::1] sv = np.ascontiguousarray(s, dtype=np.complex128)
    cdef Py_ssize_t nb = sv.shape[0], n = sv.shape[1]
    out = np.empty((nb, n, n), dtype=np.complex128)
    cdef double complex[:, :, ::1] ov = out
    cdef Py_ssize_t b, v, m, tau, w
    cdef Py_ssize_t half = n // 2
    cdef double complex cv
    for b in range(nb):
        for v in range(n):
            cv = sv[b, v].conjugate()
            for m in range(n):
                tau = m if m < n - half else m - n
                w = v + tau
                if w >= n:
                    w -= n
                elif w < 0:
                    w += n
                ov[b, v, m] = sv[b, w] * cv
    return out


def plv_all_pairs(phase):
    cdef double[:, :, ::1] ph = np.ascontiguousarray(phase, dtype=np.float64)
    cdef Py_ssize_t L = ph.shape[0], N = ph.shape[1], M = ph.shape[2]
    c_arr = np.empty((L, N, M))
    s_arr = np.empty((L, N, M))
    cdef double[:, :, ::1] c = c_arr
    cdef double[:, :, ::1] s = s_arr
    cdef Py_ssize_t i, j, k, m
    for k in range(L):
        for i in range(N):
            for m in range(M):
                c[k, i, m] = cos(ph[k, i, m])
                s[k, i, m] = sin(ph[k, i, m])
    out = np.empty((N, N, M))
    cdef double[:, :, ::1] o = out
    re_arr = np.empty(M)
    im_arr = np.empty(M)
    cdef double[::1] re = re_arr
    cdef double[::1] im = im_arr
    cdef double cd, sd, val
    for i in range(N):
        for m in range(M):
            o[i, i, m] = 1.0
        for j in range(i + 1, N):
            for m in range(M):
                re[m] = 0.0
                im[m] = 0.0
            for k in range(L):
                for m in range(M):
                    cd = c[k, i, m] * c[k, j, m] + s[k, i, m] * s[k, j, m]
                    sd = s[k, i, m] * c[k, j, m] - c[k, i, m] * s[k, j, m]
                    re[m] += cd
                    if ph[k, i, m] - ph[k, j, m] < 0.0:
                        im[m] -= sd
                    else:
                        im[m] += sd
            for m in range(M):
                val = sqrt(re[m] * re[m] + im[m] * im[m]) / L
                if val > 1.0:
                    val = 1.0
                o[i, j, m] = val
                o[j, i, m] = val
    return out
