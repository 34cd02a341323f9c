"""Pure-numpy kernels; same contracts as the compiled module.

Array arguments must share one shape. Scalars are accepted and broadcast.
"""
import numpy as np


def cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, tau):
    """Residual of the H = 1/2 graph equation per element (LHS - RHS)."""
    f = np.asarray(f, dtype=float)
    fx = np.asarray(fx, dtype=float)
    ft = np.asarray(ft, dtype=float)
    fxx = np.asarray(fxx, dtype=float)
    fxt = np.asarray(fxt, dtype=float)
    ftt = np.asarray(ftt, dtype=float)
    a = f * fx + 2.0 * tau * ft
    w2 = f * f + ft * ft + a * a
    w = np.sqrt(w2)
    lhs = ((f * f + ft * ft) * fxx
           - 2.0 * (fx * ft - 2.0 * tau * f) * fxt
           + (fx * fx + 1.0 + 4.0 * tau * tau) * ftt)
    rhs = -f * (1.0 + fx * fx) - 2.0 * tau * fx * ft + w2 * w / (f * f)
    return lhs - rhs


def frozen_coefficients_arrays(f, fx, ft, tau):
    """Coefficients (a, b, c, d, e) of the frozen linear operator."""
    f = np.asarray(f, dtype=float)
    fx = np.asarray(fx, dtype=float)
    ft = np.asarray(ft, dtype=float)
    awk = f * fx + 2.0 * tau * ft
    w2 = f * f + ft * ft + awk * awk
    w = np.sqrt(w2)
    q = w2 / (f * f * (w + f)) + 1.0 / f
    a = f * f + ft * ft
    b = 2.0 * tau * f - fx * ft
    c = fx * fx + 1.0 + 4.0 * tau * tau
    d = f * fx + 2.0 * tau * ft - q * f * f * fx
    e = -q * ((1.0 + 4.0 * tau * tau) * ft + 4.0 * tau * f * fx)
    return a, b, c, d, e


def holder_seminorm(h11, h12, h22, x, t, alpha, window):
    """Max finite-difference Hoelder quotient of the Hessian per node.

    For each node X the maximum over grid neighbors Y within Chebyshev
    index distance ``window`` (theta wraps, radial rows clipped) of
    ||Hess(X) - Hess(Y)||_F / |X - Y|^alpha, with Frobenius norm on the
    symmetric Hessian and Euclidean distance in the (x, t) plane.
    """
    h11 = np.asarray(h11, dtype=float)
    h12 = np.asarray(h12, dtype=float)
    h22 = np.asarray(h22, dtype=float)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    n_r, n_t = h11.shape
    out = np.zeros((n_r, n_t))
    for di in range(-window, window + 1):
        lo = max(0, -di)
        hi = n_r - max(0, di)
        if hi <= lo:
            continue
        for dj in range(-window, window + 1):
            if di == 0 and dj == 0:
                continue
            s11 = np.roll(h11, -dj, axis=1)[lo + di:hi + di]
            s12 = np.roll(h12, -dj, axis=1)[lo + di:hi + di]
            s22 = np.roll(h22, -dj, axis=1)[lo + di:hi + di]
            sx = np.roll(x, -dj, axis=1)[lo + di:hi + di]
            st = np.roll(t, -dj, axis=1)[lo + di:hi + di]
            d11 = h11[lo:hi] - s11
            d12 = h12[lo:hi] - s12
            d22 = h22[lo:hi] - s22
            num = np.sqrt(d11 * d11 + 2.0 * d12 * d12 + d22 * d22)
            dist = np.hypot(x[lo:hi] - sx, t[lo:hi] - st)
            np.maximum(out[lo:hi], num / dist**alpha, out=out[lo:hi])
    return out
