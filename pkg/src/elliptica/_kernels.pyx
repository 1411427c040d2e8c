# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluation kernels; see ``_kernels_py`` for the reference version."""
import numpy as np

from libc.math cimport rint, hypot, INFINITY

cdef int OK = 0
cdef int POLE = 1
cdef int FAILED = 2


cdef inline double cabs(double complex w) nogil:
    return hypot(w.real, w.imag)


cdef inline double norm2(double complex w) nogil:
    return w.real * w.real + w.imag * w.imag


cdef inline double complex reduce_one(double complex z, double complex tau,
                                      double *bm, double *bn) nogil:
    # nearest lattice point to z over the 3x3 stencil around the rounded coordinates
    cdef double y = z.imag / tau.imag
    cdef double x = z.real - y * tau.real
    cdef double m = rint(x)
    cdef double n = rint(y)
    cdef double complex best = z - m - n * tau
    cdef double best_r = norm2(best)
    cdef double complex cand
    cdef double cr
    cdef int dm, dn
    bm[0] = m
    bn[0] = n
    for dm in range(-1, 2):
        for dn in range(-1, 2):
            cand = z - (m + dm) - (n + dn) * tau
            cr = norm2(cand)
            if cr < best_r:
                best = cand
                best_r = cr
                bm[0] = m + dm
                bn[0] = n + dn
    return best


def reduce_core(z, double complex tau):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=complex).ravel()
    cdef Py_ssize_t N = zv.shape[0], i
    out = np.empty(N, dtype=complex)
    ms = np.empty(N, dtype=np.int64)
    ns = np.empty(N, dtype=np.int64)
    cdef double complex[::1] ov = out
    cdef long long[::1] mv = ms
    cdef long long[::1] nv = ns
    cdef double m, n
    with nogil:
        for i in range(N):
            ov[i] = reduce_one(zv[i], tau, &m, &n)
            mv[i] = <long long> m
            nv[i] = <long long> n
    return out, ms, ns


def wp_core(z, double complex tau, coeffs, e, B, double series_radius,
            double pole_radius, double max_radius):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=complex).ravel()
    cdef double complex[::1] cv = np.ascontiguousarray(coeffs, dtype=complex)
    cdef double complex[::1] ev = np.ascontiguousarray(e, dtype=complex)
    cdef double complex[::1] bv = np.ascontiguousarray(B, dtype=complex)
    cdef Py_ssize_t N = zv.shape[0], K = cv.shape[0], i, j
    p_out = np.empty(N, dtype=complex)
    pp_out = np.empty(N, dtype=complex)
    flag_out = np.zeros(N, dtype=np.int8)
    cdef double complex[::1] pv = p_out
    cdef double complex[::1] ppv = pp_out
    cdef signed char[::1] fv = flag_out
    cdef double complex u, v, t, A, D, den, ei, Bi
    cdef double r, fa, fb
    cdef int ba, bb, cls
    with nogil:
        for i in range(N):
            u = reduce_one(zv[i], tau, &fa, &fb)
            r = cabs(u)
            v = u
            ba = 0
            bb = 0
            if r > series_radius:
                # nearest half-lattice point h = (a + b tau)/2, from the lattice point nearest 2u
                v = 0.5 * reduce_one(2 * u, tau, &fa, &fb)
                ba = <int> fa
                bb = <int> fb
            cls = (ba & 1) + 2 * (bb & 1)
            if cabs(v) > max_radius:
                fv[i] = FAILED
            t = v * v
            A = 0
            D = 0
            for j in range(K - 1, -1, -1):
                A = A * t + cv[j]
                D = D * t + (2 * j + 2) * cv[j]
            A = A * t
            D = D * t * t
            if cls == 0:
                if r < pole_radius or t == 0:
                    pv[i] = INFINITY
                    ppv[i] = INFINITY
                    fv[i] = POLE
                else:
                    pv[i] = 1.0 / t + A
                    ppv[i] = (D - 2.0) / (v * t)
            else:
                ei = ev[cls - 1]
                Bi = bv[cls - 1]
                den = 1.0 + t * (A - ei)
                pv[i] = ei + Bi * t / den
                ppv[i] = -Bi * (D - 2.0) * v / (den * den)
    return p_out, pp_out, flag_out
