# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 ray kernel for conformally flat planar spacetimes.

Same interface and arithmetic as ``_raykernel_py.rk4_planar``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

cdef int STATUS_OK = 0
cdef int STATUS_LEFT = 1
cdef int STATUS_NONFINITE = 2


cdef inline void _lam(int variant, double a, double x, double y, double* out) noexcept nogil:
    cdef double s
    if variant == 1:
        out[0] = a / x
        out[1] = -a / (x * x)
        out[2] = 0.0
    elif variant == 2:
        s = 1.0 - x * x - y * y
        out[0] = 2.0 * a / s
        out[1] = 4.0 * a * x / (s * s)
        out[2] = 4.0 * a * y / (s * s)
    else:
        out[0] = 1.0
        out[1] = 0.0
        out[2] = 0.0


cdef inline void _rhs(double* st, int variant, double a, double q, double ex, double ey,
                      double b, double* out) noexcept nogil:
    cdef double lamv[3]
    cdef double x = st[1], y = st[2]
    _lam(variant, a, x, y, lamv)
    cdef double lam = lamv[0]
    cdef double k0 = st[4] - q * (ex * x + ey * y)
    cdef double k1 = st[5] + q * 0.5 * b * y
    cdef double k2 = st[6] - q * 0.5 * b * x
    cdef double k3 = st[7]
    cdef double il2 = 1.0 / (lam * lam)
    cdef double u0 = -k0, u1 = k1 * il2, u2 = k2 * il2
    cdef double kk = (k1 * k1 + k2 * k2) * il2 / lam
    out[0] = u0
    out[1] = u1
    out[2] = u2
    out[3] = k3
    out[4] = 0.0
    out[5] = kk * lamv[1] + q * (ex * u0 + 0.5 * b * u2)
    out[6] = kk * lamv[2] + q * (ey * u0 - 0.5 * b * u1)
    out[7] = 0.0


def rk4_planar(x0, p0, int variant, double a, double q, double ex, double ey, double b,
               double dt, int nsteps, lo, hi):
    """Integrate ``nsteps`` RK4 steps; returns ``(xs, ps, done, status)``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] xs = np.zeros((nsteps + 1, 4))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ps = np.zeros((nsteps + 1, 4))
    cdef double st[8]
    cdef double tmp[8]
    cdef double s1[8]
    cdef double s2[8]
    cdef double s3[8]
    cdef double s4[8]
    cdef double lov[4]
    cdef double hiv[4]
    cdef int i, n
    cdef double half = 0.5 * dt
    for i in range(4):
        st[i] = x0[i]
        st[4 + i] = p0[i]
        lov[i] = lo[i]
        hiv[i] = hi[i]
        xs[0, i] = st[i]
        ps[0, i] = st[4 + i]
    for n in range(nsteps):
        _rhs(st, variant, a, q, ex, ey, b, s1)
        for i in range(8):
            tmp[i] = st[i] + half * s1[i]
        _rhs(tmp, variant, a, q, ex, ey, b, s2)
        for i in range(8):
            tmp[i] = st[i] + half * s2[i]
        _rhs(tmp, variant, a, q, ex, ey, b, s3)
        for i in range(8):
            tmp[i] = st[i] + dt * s3[i]
        _rhs(tmp, variant, a, q, ex, ey, b, s4)
        for i in range(8):
            st[i] += dt / 6.0 * (s1[i] + 2.0 * s2[i] + 2.0 * s3[i] + s4[i])
        for i in range(8):
            if not isfinite(st[i]):
                return xs, ps, n, STATUS_NONFINITE
        for i in range(4):
            if st[i] < lov[i] or st[i] > hiv[i]:
                return xs, ps, n, STATUS_LEFT
        for i in range(4):
            xs[n + 1, i] = st[i]
            ps[n + 1, i] = st[4 + i]
    return xs, ps, nsteps, STATUS_OK
