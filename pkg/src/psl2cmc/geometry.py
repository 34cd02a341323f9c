"""Ambient geometry of the twisted hyperbolic half-space.

The model is the upper half-space {(x, y, t) : y > 0} carrying the metric

    g = lambda^2 (dx^2 + dy^2) + (-2 tau lambda dx + dt)^2,    lambda = 1/y,

where tau is the bundle-curvature parameter (tau = 0 is the Riemannian
product H^2 x R).  All frame computations use the global orthonormal frame

    E1 = (1/lambda) d_x + 2 tau d_t,    E2 = (1/lambda) d_y,    E3 = d_t,

with E3 the vertical Killing field and span{E1, E2} the horizontal
distribution.  Vectors are reported either by coordinate components
(d_x, d_y, d_t) or by frame coefficients (E1, E2, E3); functions say which.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "ModelParams",
    "Point3",
    "metric_at",
    "frame_at",
    "connection_frame",
    "lie_bracket_frame",
    "base_horocycle_curvature",
    "check_suite",
]


@dataclass(frozen=True)
class ModelParams:
    """Bundle curvature tau of the model."""

    tau: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.tau):
            raise ValueError("tau must be finite")


@dataclass(frozen=True)
class Point3:
    """A point (x, y, t) of the half-space; y must be positive."""

    x: float
    y: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.t)):
            raise DomainError("point coordinates must be finite")
        if self.y <= 0.0:
            raise DomainError(f"y must be positive, got {self.y}")


def metric_at(p: Point3, params: ModelParams) -> np.ndarray:
    """Coordinate Gram matrix of the metric at ``p``.

    Returns the symmetric 3x3 matrix in the coordinate basis
    (d_x, d_y, d_t).  Expanding the defining line element gives

        g_xx = lambda^2 (1 + 4 tau^2),  g_yy = lambda^2,  g_tt = 1,
        g_xt = -2 tau lambda,           g_xy = g_yt = 0.
    """
    lam = 1.0 / p.y
    tau = params.tau
    g = np.zeros((3, 3))
    g[0, 0] = lam * lam * (1.0 + 4.0 * tau * tau)
    g[1, 1] = lam * lam
    g[2, 2] = 1.0
    g[0, 2] = g[2, 0] = -2.0 * tau * lam
    return g


def frame_at(p: Point3, params: ModelParams) -> np.ndarray:
    """Coordinate components of the orthonormal frame at ``p``.

    Row k holds the (d_x, d_y, d_t) components of E_{k+1}:
    E1 = y d_x + 2 tau d_t, E2 = y d_y, E3 = d_t.
    """
    tau = params.tau
    return np.array([
        [p.y, 0.0, 2.0 * tau],
        [0.0, p.y, 0.0],
        [0.0, 0.0, 1.0],
    ])


# Frame coefficients of nabla_{E_i} E_j for lambda = 1/y.  The general-lambda
# table carries lambda_y/lambda^2 and lambda_x/lambda^2 factors; here they are
# the constants -1 and 0, so the whole table is constant in the point.
def _connection_table(tau: float) -> np.ndarray:
    G = np.zeros((3, 3, 3))
    G[0, 0] = (0.0, 1.0, 0.0)          # nabla_{E1} E1 = +E2
    G[0, 1] = (-1.0, 0.0, tau)         # nabla_{E1} E2 = -E1 + tau E3
    G[0, 2] = (0.0, -tau, 0.0)         # nabla_{E1} E3 = -tau E2
    G[1, 0] = (0.0, 0.0, -tau)         # nabla_{E2} E1 = -tau E3
    G[1, 1] = (0.0, 0.0, 0.0)
    G[1, 2] = (tau, 0.0, 0.0)          # nabla_{E2} E3 = tau E1
    G[2, 0] = (0.0, -tau, 0.0)         # nabla_{E3} E1 = -tau E2
    G[2, 1] = (tau, 0.0, 0.0)          # nabla_{E3} E2 = tau E1
    G[2, 2] = (0.0, 0.0, 0.0)
    return G


def _check_index(i: int) -> None:
    if i not in (1, 2, 3):
        raise ValueError(f"frame index must be 1, 2 or 3, got {i}")


def connection_frame(i: int, j: int, p: Point3, params: ModelParams) -> np.ndarray:
    """Frame coefficients of nabla_{E_i} E_j at ``p`` (1-based indices)."""
    _check_index(i)
    _check_index(j)
    Point3(p.x, p.y, p.t)  # revalidate domain
    return _connection_table(params.tau)[i - 1, j - 1].copy()


def lie_bracket_frame(i: int, j: int, p: Point3, params: ModelParams) -> np.ndarray:
    """Frame coefficients of [E_i, E_j] at ``p`` (1-based indices).

    Only [E1, E2] = -E1 + 2 tau E3 is nonzero (up to antisymmetry).
    """
    _check_index(i)
    _check_index(j)
    Point3(p.x, p.y, p.t)
    tau = params.tau
    out = np.zeros(3)
    if (i, j) == (1, 2):
        out[:] = (-1.0, 0.0, 2.0 * tau)
    elif (i, j) == (2, 1):
        out[:] = (1.0, 0.0, -2.0 * tau)
    return out


def _frame_component_field(k: int, x: float, y: float, t: float, tau: float) -> np.ndarray:
    # coordinate components of E_k as a function of the point
    if k == 1:
        return np.array([y, 0.0, 2.0 * tau])
    if k == 2:
        return np.array([0.0, y, 0.0])
    return np.array([0.0, 0.0, 1.0])


def _bracket_fd(i: int, j: int, p: Point3, params: ModelParams, h: float = 1e-4) -> np.ndarray:
    """Coordinate bracket [E_i, E_j] by central differences of the components."""
    tau = params.tau
    q = np.array([p.x, p.y, p.t])

    def comp(k, pt):
        return _frame_component_field(k, pt[0], pt[1], pt[2], tau)

    # partial_m of the component vectors
    dEi = np.zeros((3, 3))
    dEj = np.zeros((3, 3))
    for m in range(3):
        step = np.zeros(3)
        step[m] = h * max(1.0, abs(q[m]))
        dEi[m] = (comp(i, q + step) - comp(i, q - step)) / (2.0 * step[m])
        dEj[m] = (comp(j, q + step) - comp(j, q - step)) / (2.0 * step[m])
    Ei = comp(i, q)
    Ej = comp(j, q)
    return Ei @ dEj - Ej @ dEi


def base_horocycle_curvature(c: float, h: float = 1e-5) -> float:
    """Geodesic curvature of the horizontal line y = c in the hyperbolic plane.

    Uses the metric (dx^2 + dy^2)/y^2 on {y > 0} and a finite-difference
    Frenet computation: Christoffel symbols are differenced from the metric,
    the curve is run at unit speed, and the covariant acceleration is paired
    with the upward unit normal.  The value is 1 for every c (horocycles),
    with the sign fixed by the upward normal; this matches twice the mean
    curvature of the horocylinder graph f = c.
    """
    if c <= 0.0:
        raise DomainError(f"horocycle height must be positive, got {c}")

    def g2(xy):
        y = xy[1]
        return np.array([[1.0 / y**2, 0.0], [0.0, 1.0 / y**2]])

    p = np.array([0.0, c])
    step = h * max(1.0, c)
    dg = np.zeros((2, 2, 2))  # dg[m] = partial_m g
    for m in range(2):
        e = np.zeros(2)
        e[m] = step
        dg[m] = (g2(p + e) - g2(p - e)) / (2.0 * step)
    ginv = np.linalg.inv(g2(p))
    Gamma = np.zeros((2, 2, 2))  # Gamma[k, i, j]
    for k in range(2):
        for i in range(2):
            for j in range(2):
                Gamma[k, i, j] = 0.5 * sum(
                    ginv[k, l] * (dg[i][j, l] + dg[j][i, l] - dg[l][i, j])
                    for l in range(2)
                )
    # unit-speed parameterization of y = c runs at dx/ds = c
    T = np.array([c, 0.0])
    acc = np.array([Gamma[k, 0, 0] * T[0] * T[0] for k in range(2)])
    n_up = np.array([0.0, c])  # upward unit normal
    return float(acc @ g2(p) @ n_up)


def _random_points(rng: np.random.Generator, n: int):
    xs = rng.uniform(-5.0, 5.0, n)
    ys = rng.uniform(0.1, 10.0, n)
    ts = rng.uniform(-5.0, 5.0, n)
    return xs, ys, ts


def check_suite(seed: int, samples: int, tau: float | None = None) -> dict:
    """Max deviations of the frame/connection identities at random points.

    Checks, per point: frame orthonormality against the coordinate metric,
    torsion-freeness and metric compatibility of the connection table,
    the frame brackets against central finite differences of the frame
    component fields, and the Killing property of E3 (t-derivative of the
    metric by central differences).
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    xs, ys, ts = _random_points(rng, samples)
    taus = np.full(samples, tau) if tau is not None else rng.uniform(-2.0, 2.0, samples)

    dev = {
        "orthonormality": 0.0,
        "torsion": 0.0,
        "metric_compatibility": 0.0,
        "bracket_fd": 0.0,
        "killing_fd": 0.0,
    }
    eye = np.eye(3)
    for n in range(samples):
        p = Point3(float(xs[n]), float(ys[n]), float(ts[n]))
        params = ModelParams(float(taus[n]))
        G = metric_at(p, params)
        F = frame_at(p, params)
        dev["orthonormality"] = max(dev["orthonormality"], float(np.max(np.abs(F @ G @ F.T - eye))))

        for i in (1, 2, 3):
            for j in (1, 2, 3):
                tors = (connection_frame(i, j, p, params)
                        - connection_frame(j, i, p, params)
                        - lie_bracket_frame(i, j, p, params))
                dev["torsion"] = max(dev["torsion"], float(np.max(np.abs(tors))))
                for k in (1, 2, 3):
                    comp = (connection_frame(k, i, p, params)[j - 1]
                            + connection_frame(k, j, p, params)[i - 1])
                    dev["metric_compatibility"] = max(dev["metric_compatibility"], abs(comp))
                br = _bracket_fd(i, j, p, params)
                coeffs = np.linalg.solve(F.T, br)
                dev["bracket_fd"] = max(dev["bracket_fd"],
                                        float(np.max(np.abs(coeffs - lie_bracket_frame(i, j, p, params)))))

        h = 1e-4 * max(1.0, abs(p.t))
        gp = metric_at(Point3(p.x, p.y, p.t + h), params)
        gm = metric_at(Point3(p.x, p.y, p.t - h), params)
        dev["killing_fd"] = max(dev["killing_fd"], float(np.max(np.abs(gp - gm) / (2.0 * h))))
    return dev
