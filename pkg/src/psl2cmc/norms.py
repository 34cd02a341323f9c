"""Scale-weighted Hoelder norms of fields on annular grids.

For a field v on the annulus the norm is the sup over nodes of

    |v| + r |Dv| + r^2 |D^2 v|_F + r^(2+alpha) [D^2 v]_alpha,

with Cartesian derivatives from the log-polar jets, the Frobenius norm
sqrt(v_xx^2 + 2 v_xt^2 + v_tt^2) on the Hessian, and a local Hoelder
quotient of the Hessian taken over node pairs within a small index window
(theta wraps; Euclidean node distance in the plane).  The r-weights make
the norm scale naturally under dilations of the annulus.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .annulus import AnnulusField, AnnulusSpec, barrier_field, polar_cartesian_jet

__all__ = ["weighted_norm", "admissibility_check"]


def weighted_norm(field: AnnulusField, alpha: float = 0.5,
                  mask: np.ndarray | None = None, window: int = 2) -> float:
    """Sup of |v| + r|Dv| + r^2|D^2v|_F + r^(2+alpha) [D^2v]_alpha over the mask.

    Derivatives are second-order finite differences (one-sided at the
    radial edges); the Hoelder quotient at a node is maximized over all
    nodes within Chebyshev index distance `window`.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if window < 1:
        raise ValueError(f"window must be at least 1, got {window}")
    grid = field.grid
    v, vx, vt, vxx, vxt, vtt = polar_cartesian_jet(field, order=2)
    grad = np.hypot(vx, vt)
    hess = np.sqrt(vxx ** 2 + 2.0 * vxt ** 2 + vtt ** 2)
    x, t = grid.nodes_xy()
    quot = _backend.holder_seminorm(vxx, vxt, vtt, x, t, alpha, int(window))
    r = grid.r[:, None]
    node = np.abs(v) + r * grad + r ** 2 * hess + r ** (2.0 + alpha) * quot
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != node.shape:
            raise ValueError("mask shape must match the grid")
        if not np.any(mask):
            raise ValueError("mask selects no nodes")
        node = node[mask]
    return float(np.max(node))


def admissibility_check(f: AnnulusField, spec: AnnulusSpec,
                        alpha: float = 0.5, window: int = 2) -> tuple:
    """Weighted-norm smallness of the deviation from the log barrier.

    Returns (flag, norm) where norm = |f - h|_* and the flag says whether
    it is at most sqrt(eps), the smallness the barrier argument needs.
    """
    h = barrier_field(spec, f.grid)
    u = AnnulusField(f.grid, f.values - h.values)
    norm = weighted_norm(u, alpha=alpha, window=window)
    return bool(norm <= math.sqrt(spec.eps)), norm
