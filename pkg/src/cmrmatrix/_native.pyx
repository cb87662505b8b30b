# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Must agree with ``_fallback`` to rounding."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sinh, cosh, fabs

cnp.import_array()

cdef enum:
    RATIONAL = 0
    HYPERBOLIC = 1
    TRIGONOMETRIC = 2


def cybe_int(const long long[:, :, :, ::1] r):
    cdef Py_ssize_t n = r.shape[0]
    out = np.zeros((n, n, n, n, n, n), dtype=np.int64)
    cdef long long[:, :, :, :, :, ::1] x = out
    cdef Py_ssize_t a, b, c, d, e, f, y
    cdef long long s
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for e in range(n):
                        for f in range(n):
                            s = 0
                            for y in range(n):
                                s += r[a, y, c, d] * r[y, b, e, f]
                                s -= r[a, y, e, f] * r[y, b, c, d]
                                s += r[a, b, c, y] * r[y, d, e, f]
                                s -= r[c, y, e, f] * r[a, b, y, d]
                                s += r[a, b, e, y] * r[c, d, y, f]
                                s -= r[c, d, e, y] * r[a, b, y, f]
                            x[a, b, c, d, e, f] = s
    return out


cdef inline double _chart(double d, int code, double a) nogil:
    if code == TRIGONOMETRIC:
        return sin(a * d)
    return d


cdef inline int _sgn(double x) nogil:
    return (x > 0) - (x < 0)


cdef int _force(double[::1] q, double[::1] out, int code, double a, double guard,
                int[:, ::1] sign0, int* bk, int* bl) nogil:
    cdef Py_ssize_t n = q.shape[0], k, l
    cdef double d, s, vp
    for k in range(n):
        out[k] = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            d = q[k] - q[l]
            s = _chart(d, code, a)
            if fabs(s) < guard or _sgn(s) != sign0[k, l]:
                bk[0] = <int>k
                bl[0] = <int>l
                return 1
            if code == RATIONAL:
                vp = -2.0 / (d * d * d)
            elif code == HYPERBOLIC:
                s = sinh(a * d)
                vp = -2.0 * a * a * a * cosh(a * d) / (s * s * s)
            else:
                vp = -2.0 * a * a * a * cos(a * d) / (s * s * s)
            # v' is odd: the (l, k) term is -vp
            out[k] -= vp
            out[l] += vp
    return 0


def cm_flow(q0, p0, int code, double a, double dt, Py_ssize_t steps, double guard):
    cdef Py_ssize_t n = len(q0), i, k, l
    qs_arr = np.empty((steps + 1, n))
    ps_arr = np.empty((steps + 1, n))
    cdef double[:, ::1] qs = qs_arr
    cdef double[:, ::1] ps = ps_arr
    cdef double[::1] q = np.array(q0, dtype=np.float64)
    cdef double[::1] p = np.array(p0, dtype=np.float64)
    cdef double[::1] tmp = np.empty(n)
    cdef double[::1] f1 = np.empty(n)
    cdef double[::1] f2 = np.empty(n)
    cdef double[::1] f3 = np.empty(n)
    cdef double[::1] f4 = np.empty(n)
    cdef int[:, ::1] sign0 = np.zeros((n, n), dtype=np.intc)
    cdef int bk = -1, bl = -1
    cdef double h2 = 0.5 * dt
    for k in range(n):
        qs[0, k] = q[k]
        ps[0, k] = p[k]
        for l in range(k + 1, n):
            sign0[k, l] = _sgn(_chart(q[k] - q[l], code, a))
    if _force(q, f1, code, a, guard, sign0, &bk, &bl):
        return qs_arr[:1], ps_arr[:1], 0, bk, bl
    with nogil:
        for i in range(steps):
            for k in range(n):
                tmp[k] = q[k] + h2 * p[k]
            if _force(tmp, f2, code, a, guard, sign0, &bk, &bl):
                break
            for k in range(n):
                tmp[k] = q[k] + h2 * (p[k] + h2 * f1[k])
            if _force(tmp, f3, code, a, guard, sign0, &bk, &bl):
                break
            for k in range(n):
                tmp[k] = q[k] + dt * (p[k] + h2 * f2[k])
            if _force(tmp, f4, code, a, guard, sign0, &bk, &bl):
                break
            for k in range(n):
                q[k] = q[k] + dt / 6.0 * (p[k] + 2.0 * (p[k] + h2 * f1[k])
                                          + 2.0 * (p[k] + h2 * f2[k]) + (p[k] + dt * f3[k]))
                p[k] = p[k] + dt / 6.0 * (f1[k] + 2.0 * f2[k] + 2.0 * f3[k] + f4[k])
            if _force(q, f1, code, a, guard, sign0, &bk, &bl):
                break
            for k in range(n):
                qs[i + 1, k] = q[k]
                ps[i + 1, k] = p[k]
    if bk >= 0:
        return qs_arr[:i + 1], ps_arr[:i + 1], i, bk, bl
    return qs_arr, ps_arr, -1, -1, -1
