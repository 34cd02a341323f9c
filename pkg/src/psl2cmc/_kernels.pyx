# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: pointwise jet algebra and the Hoelder window scan.

Contracts match ``_kernels_py``; see there for semantics.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, pow

cnp.import_array()


def cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, double tau):
    shape = np.broadcast(np.asarray(f), np.asarray(fx)).shape
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fv = np.ascontiguousarray(np.broadcast_to(f, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fxv = np.ascontiguousarray(np.broadcast_to(fx, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ftv = np.ascontiguousarray(np.broadcast_to(ft, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fxxv = np.ascontiguousarray(np.broadcast_to(fxx, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fxtv = np.ascontiguousarray(np.broadcast_to(fxt, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fttv = np.ascontiguousarray(np.broadcast_to(ftt, shape), dtype=np.float64).ravel()
    cdef Py_ssize_t n = fv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double F, FX, FT, a, w2, w, lhs, rhs
    for i in range(n):
        F = fv[i]; FX = fxv[i]; FT = ftv[i]
        a = F * FX + 2.0 * tau * FT
        w2 = F * F + FT * FT + a * a
        w = sqrt(w2)
        lhs = ((F * F + FT * FT) * fxxv[i]
               - 2.0 * (FX * FT - 2.0 * tau * F) * fxtv[i]
               + (FX * FX + 1.0 + 4.0 * tau * tau) * fttv[i])
        rhs = -F * (1.0 + FX * FX) - 2.0 * tau * FX * FT + w2 * w / (F * F)
        out[i] = lhs - rhs
    return out.reshape(shape)


def frozen_coefficients_arrays(f, fx, ft, double tau):
    shape = np.broadcast(np.asarray(f), np.asarray(fx)).shape
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fv = np.ascontiguousarray(np.broadcast_to(f, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fxv = np.ascontiguousarray(np.broadcast_to(fx, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ftv = np.ascontiguousarray(np.broadcast_to(ft, shape), dtype=np.float64).ravel()
    cdef Py_ssize_t n = fv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] av = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bv = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cv = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dv = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ev = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double F, FX, FT, a, w2, w, q
    for i in range(n):
        F = fv[i]; FX = fxv[i]; FT = ftv[i]
        a = F * FX + 2.0 * tau * FT
        w2 = F * F + FT * FT + a * a
        w = sqrt(w2)
        q = w2 / (F * F * (w + F)) + 1.0 / F
        av[i] = F * F + FT * FT
        bv[i] = 2.0 * tau * F - FX * FT
        cv[i] = FX * FX + 1.0 + 4.0 * tau * tau
        dv[i] = F * FX + 2.0 * tau * FT - q * F * F * FX
        ev[i] = -q * ((1.0 + 4.0 * tau * tau) * FT + 4.0 * tau * F * FX)
    return (av.reshape(shape), bv.reshape(shape), cv.reshape(shape),
            dv.reshape(shape), ev.reshape(shape))


def holder_seminorm(h11, h12, h22, x, t, double alpha, int window):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a11 = np.ascontiguousarray(h11, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a12 = np.ascontiguousarray(h12, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a22 = np.ascontiguousarray(h22, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ax = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] at = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t n_r = a11.shape[0]
    cdef Py_ssize_t n_t = a11.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n_r, n_t), dtype=np.float64)
    cdef Py_ssize_t i, j, i2, j2
    cdef int di, dj
    cdef double d11, d12, d22, num, dx, dt_, dist2, q, best
    # pow dominates the pair loop; the alpha = 1/2 quotient used by the
    # weighted norm reduces to two hardware square roots
    cdef bint half = alpha == 0.5
    for i in range(n_r):
        for j in range(n_t):
            best = 0.0
            for di in range(-window, window + 1):
                i2 = i + di
                if i2 < 0 or i2 >= n_r:
                    continue
                for dj in range(-window, window + 1):
                    if di == 0 and dj == 0:
                        continue
                    # cdivision gives C-style % whose sign follows the
                    # dividend; shift negatives back into [0, n_t)
                    j2 = (j + dj) % n_t
                    if j2 < 0:
                        j2 += n_t
                    d11 = a11[i, j] - a11[i2, j2]
                    d12 = a12[i, j] - a12[i2, j2]
                    d22 = a22[i, j] - a22[i2, j2]
                    num = sqrt(d11 * d11 + 2.0 * d12 * d12 + d22 * d22)
                    dx = ax[i, j] - ax[i2, j2]
                    dt_ = at[i, j] - at[i2, j2]
                    dist2 = dx * dx + dt_ * dt_
                    if half:
                        q = num / sqrt(sqrt(dist2))
                    else:
                        q = num / pow(sqrt(dist2), alpha)
                    if q > best:
                        best = q
            out[i, j] = best
    return out
