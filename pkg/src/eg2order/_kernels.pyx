# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels.

Same contract as ``_kernels_py``: everything is returned in log space so that
deep tails (x -> 0 and x -> inf) neither underflow nor overflow.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, expm1, INFINITY, isfinite

cnp.import_array()

cdef double LN2 = 0.6931471805599453
cdef double Z_LOGSPACE = 700.0
cdef double SERIES_EPS = 1e-4
cdef double Z_TINY = 1e-8


cdef inline double _log1mexp(double t) nogil:
    if t < LN2:
        return log(-expm1(-t))
    return log1p(-exp(-t))


cdef inline void _point(double log_theta, double phi, double log_phi, double alpha,
                        double log_alpha, double x,
                        double* log_sf, double* log_cdf,
                        double* log_haz, double* log_rhaz) nogil:
    cdef double logx = log(x)
    cdef double log_z = log_theta - phi * logx
    cdef double z = exp(log_z)
    cdef double e = exp(-z)
    cdef double log_u, ls, lc, scale, delta, lw
    if z < Z_TINY:
        log_u = log_z - 0.5 * z
    elif z < LN2:
        log_u = log(-expm1(-z))
    else:
        log_u = log1p(-e)
    ls = alpha * log_u
    if z > Z_LOGSPACE:
        lc = log_alpha - z
    else:
        lc = _log1mexp(-ls)
    scale = log_phi + log_z - logx
    if e < SERIES_EPS:
        delta = e * (-(alpha - 1.0) / 2.0
                     + e * ((alpha * alpha - 6.0 * alpha + 5.0) / 12.0
                            + e * (alpha * alpha - 4.0 * alpha + 3.0) / 8.0))
        lw = log1p(delta)
    else:
        lw = log_alpha - z + (alpha - 1.0) * log_u - lc
    log_sf[0] = ls
    log_cdf[0] = lc
    # log(expm1(z)) == z + log_u
    log_haz[0] = log_alpha + scale - z - log_u
    log_rhaz[0] = scale + lw


def component_terms(double theta, double phi, double alpha, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t m = xs.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] h = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.empty(m)
    cdef double lt = log(theta), lp = log(phi), la = log(alpha)
    with nogil:
        for k in range(m):
            _point(lt, phi, lp, alpha, la, xs[k], &s[k], &c[k], &h[k], &r[k])
    shape = np.shape(x)
    return s.reshape(shape), c.reshape(shape), h.reshape(shape), r.reshape(shape)


cdef inline double _lse(double* v, Py_ssize_t n) nogil:
    cdef double mx = -INFINITY, acc = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        if v[i] > mx:
            mx = v[i]
    if not isfinite(mx):
        return mx
    for i in range(n):
        acc += exp(v[i] - mx)
    return mx + log(acc)


def system_terms(thetas, phis, alphas, x):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = th.shape[0], m = xs.shape[0], i, k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_s = np.zeros(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_c = np.zeros(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_h = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_r = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hbuf = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rbuf = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lth = np.log(th)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lph = np.log(ph)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lal = np.log(al)
    cdef double s, c
    with nogil:
        for k in range(m):
            for i in range(n):
                _point(lth[i], ph[i], lph[i], al[i], lal[i], xs[k], &s, &c, &hbuf[i], &rbuf[i])
                out_s[k] += s
                out_c[k] += c
            out_h[k] = _lse(&hbuf[0], n)
            out_r[k] = _lse(&rbuf[0], n)
    shape = np.shape(x)
    return (out_s.reshape(shape), out_c.reshape(shape),
            out_h.reshape(shape), out_r.reshape(shape))
