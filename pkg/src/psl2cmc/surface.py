"""Horizontal graphs y = f(x, t) and their curvature algebra.

A horizontal graph is parameterized by phi(x, t) = (x, f(x, t), t) with
f > 0.  Writing lambda = 1/f on the surface and

    A = f f_x + 2 tau f_t,        W^2 = f^2 + f_t^2 + A^2,

the first fundamental form is

    g11 = lambda^2 ((1 + 4 tau^2) + f_x^2),
    g12 = lambda^2 f_x f_t - 2 tau lambda,
    g22 = 1 + lambda^2 f_t^2,

with det g = W^2 / f^4.  The second fundamental form is derived from the
frame connection table with the upward unit normal

    N = (-(f_x + 2 tau lambda f_t) E1 + E2 - lambda f_t E3) / Wtilde,
    Wtilde = W / f,

so constant graphs (horocylinders) get mean curvature H = +1/2.  The mean
curvature satisfies

    2 H lambda^2 W^3 = (f^2 + f_t^2) f_xx - 2 (f_x f_t - 2 tau f) f_xt
                       + ((1 + 4 tau^2) + f_x^2) f_tt
                       + f (1 + f_x^2) + 2 tau f_x f_t,

and the H = 1/2 graph equation used throughout the solver is this display
with 2 H lambda^2 W^3 = W^3 / f^2 moved to the right-hand side.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DegeneracyError, DomainError
from .geometry import (ModelParams, Point3, _connection_table,
                       base_horocycle_curvature, frame_at, metric_at)

__all__ = [
    "Jet2",
    "FormCoefficients",
    "SurfaceField",
    "gradient_w",
    "fundamental_forms",
    "mean_curvature",
    "mean_curvature_residual",
    "cmc_residual",
    "normal_frame",
    "second_form_unnormalized",
    "second_form_printed",
    "horocylinder_jet",
    "solution_jet",
    "random_jets",
    "laplacian_pointwise",
    "laplacian_pointwise_inverse",
    "laplacian_closed_forms",
    "laplacian_display",
    "laplacian_display_legacy",
    "laplacian_discrepancy_report",
    "laplace_beltrami",
    "laplacian_refinement_errors",
    "identity_suite",
]


@dataclass(frozen=True)
class Jet2:
    """Second-order jet (f, f_x, f_t, f_xx, f_xt, f_tt) of a graph; f > 0."""

    f: float
    fx: float = 0.0
    ft: float = 0.0
    fxx: float = 0.0
    fxt: float = 0.0
    ftt: float = 0.0

    def __post_init__(self):
        vals = (self.f, self.fx, self.ft, self.fxx, self.fxt, self.ftt)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("jet entries must be finite")
        if self.f <= 0.0:
            raise DomainError(f"graph value f must be positive, got {self.f}")


@dataclass(frozen=True)
class FormCoefficients:
    """First and second fundamental form coefficients of a graph jet."""

    g11: float
    g12: float
    g22: float
    b11: float
    b12: float
    b22: float

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 ** 2


def _w(f, fx, ft, tau):
    a = f * fx + 2.0 * tau * ft
    return np.sqrt(f * f + ft * ft + a * a)


def gradient_w(j: Jet2, params: ModelParams) -> float:
    """Gradient function W = sqrt(f^2 + f_t^2 + (f f_x + 2 tau f_t)^2)."""
    return float(_w(j.f, j.fx, j.ft, params.tau))


def _tangent_frame_data(j: Jet2, params: ModelParams):
    # frame coefficients of phi_x, phi_t and their surface derivatives
    tau = params.tau
    f, fx, ft, fxx, fxt, ftt = j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt
    lam = 1.0 / f
    lam_x = -fx / f ** 2
    lam_t = -ft / f ** 2
    c = np.array([lam, lam * fx, -2.0 * tau * lam])
    d = np.array([0.0, lam * ft, 1.0])
    dc_dx = np.array([lam_x, lam_x * fx + lam * fxx, -2.0 * tau * lam_x])
    dc_dt = np.array([lam_t, lam_t * fx + lam * fxt, -2.0 * tau * lam_t])
    dd_dx = np.array([0.0, lam_x * ft + lam * fxt, 0.0])
    dd_dt = np.array([0.0, lam_t * ft + lam * ftt, 0.0])
    return c, d, dc_dx, dc_dt, dd_dx, dd_dt


def _covariant(base: np.ndarray, vec: np.ndarray, dvec: np.ndarray, G: np.ndarray) -> np.ndarray:
    # nabla along base of the field with frame coeffs vec, surface derivative dvec
    out = dvec.copy()
    for a in range(3):
        for b in range(3):
            out += base[a] * vec[b] * G[a, b]
    return out


def normal_frame(j: Jet2, params: ModelParams) -> np.ndarray:
    """Frame coefficients of the upward unit normal."""
    tau = params.tau
    lam = 1.0 / j.f
    raw = np.array([-(j.fx + 2.0 * tau * lam * j.ft), 1.0, -lam * j.ft])
    return raw / math.sqrt(raw @ raw)


def fundamental_forms(j: Jet2, params: ModelParams) -> FormCoefficients:
    """Both fundamental forms, the second derived from the connection table.

    Raises DegeneracyError when the first form degenerates numerically
    (analytically det g = W^2/f^4 > 0 for every valid jet).
    """
    G = _connection_table(params.tau)
    c, d, dc_dx, dc_dt, dd_dx, dd_dt = _tangent_frame_data(j, params)
    N = normal_frame(j, params)
    b11 = float(_covariant(c, c, dc_dx, G) @ N)
    b12 = float(_covariant(c, d, dd_dx, G) @ N)
    b22 = float(_covariant(d, d, dd_dt, G) @ N)
    g11 = float(c @ c)
    g12 = float(c @ d)
    g22 = float(d @ d)
    forms = FormCoefficients(g11, g12, g22, b11, b12, b22)
    if not math.isfinite(forms.det) or forms.det <= 0.0:
        raise DegeneracyError(f"degenerate first fundamental form, det = {forms.det}")
    return forms


def second_form_unnormalized(j: Jet2, params: ModelParams) -> tuple[float, float, float]:
    """Second form paired with the unnormalized normal Wtilde * N (diagnostic)."""
    forms = fundamental_forms(j, params)
    tau = params.tau
    lam = 1.0 / j.f
    wt = math.sqrt(1.0 + (j.fx + 2.0 * tau * lam * j.ft) ** 2 + (lam * j.ft) ** 2)
    return forms.b11 * wt, forms.b12 * wt, forms.b22 * wt


def second_form_printed(j: Jet2, params: ModelParams) -> tuple[float, float, float]:
    """A compact closed form of the unnormalized second form, kept for diagnostics."""
    tau = params.tau
    f, fx, ft, fxx, fxt, ftt = j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt
    lam = 1.0 / f
    k = 1.0 + 4.0 * tau * tau
    b11 = lam * fxx + lam ** 2 * k * fx ** 2 + 2.0 * tau * lam ** 3 * k * fx * ft + lam ** 2 * k
    b12 = lam * fxt - tau * lam * fx ** 2 + 2.0 * tau * lam ** 3 * (0.5 + 2.0 * tau * tau) * ft ** 2 - tau * lam
    b22 = lam * ftt - 2.0 * tau * lam * fx * ft - lam ** 2 * ft ** 2 * k
    return b11, b12, b22


def mean_curvature(j: Jet2, params: ModelParams) -> float:
    """Mean curvature of the graph with respect to the upward normal."""
    forms = fundamental_forms(j, params)
    num = forms.b11 * forms.g22 + forms.b22 * forms.g11 - 2.0 * forms.b12 * forms.g12
    return float(num / (2.0 * forms.det))


def _display_rhs(f, fx, ft, fxx, fxt, ftt, tau):
    return ((f * f + ft * ft) * fxx
            - 2.0 * (fx * ft - 2.0 * tau * f) * fxt
            + ((1.0 + 4.0 * tau * tau) + fx * fx) * ftt
            + f * (1.0 + fx * fx) + 2.0 * tau * fx * ft)


def mean_curvature_residual(j: Jet2, H: float, params: ModelParams) -> float:
    """Residual (LHS - RHS) of the prescribed-curvature display 2H lam^2 W^3 = ..."""
    tau = params.tau
    w = _w(j.f, j.fx, j.ft, tau)
    lhs = 2.0 * H * w ** 3 / j.f ** 2
    return float(lhs - _display_rhs(j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt, tau))


def cmc_residual(j: Jet2, params: ModelParams) -> float:
    """Residual (LHS - RHS) of the rearranged H = 1/2 graph equation.

    Identical terms to mean_curvature_residual(j, 1/2, params) up to the
    rearrangement; the relating factor is exactly -1.
    """
    return float(_backend.cmc_residual_arrays(
        j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt, params.tau))


def horocylinder_jet(c: float) -> Jet2:
    """Jet of the constant graph f = c."""
    return Jet2(c)


def solution_jet(f: float, fx: float, ft: float, fxt: float, ftt: float,
                 params: ModelParams) -> Jet2:
    """Complete a jet so it satisfies the H = 1/2 equation (solves for f_xx)."""
    tau = params.tau
    w = _w(f, fx, ft, tau)
    fxx = (w ** 3 / f ** 2 - f * (1.0 + fx ** 2) - 2.0 * tau * fx * ft
           + 2.0 * (fx * ft - 2.0 * tau * f) * fxt
           - (fx ** 2 + 1.0 + 4.0 * tau * tau) * ftt) / (f ** 2 + ft ** 2)
    return Jet2(f, fx, ft, float(fxx), fxt, ftt)


def random_jets(rng: np.random.Generator, n: int,
                f_range=(0.2, 5.0), d_range=(-2.0, 2.0)):
    """Component arrays (f, fx, ft, fxx, fxt, ftt) of n random jets."""
    f = rng.uniform(*f_range, n)
    rest = [rng.uniform(*d_range, n) for _ in range(5)]
    return (f, *rest)


# ---------------------------------------------------------------------------
# surface Laplacian: exact pointwise expansion, closed forms, discrete operator
# ---------------------------------------------------------------------------

def _flux_divergence(f, fx, ft, fxx, fxt, ftt, tau):
    """D_x(P f_x + Q f_t) + D_t(Q f_x + R f_t) expanded through the jet.

    P = (f^2+f_t^2)/W, Q = (2 tau f - f_x f_t)/W, R = ((1+4tau^2)+f_x^2)/W
    are sqrt(g) g^{ij}; their partials with respect to (f, f_x, f_t) are
    written out so the total derivatives need only the 2-jet.  Also returns
    the fluxes (u, v) for the chain-rule form of the 1/f Laplacian.
    """
    a = f * fx + 2.0 * tau * ft
    w2 = f * f + ft * ft + a * a
    w = np.sqrt(w2)
    ac = f * f + ft * ft
    bc = 2.0 * tau * f - fx * ft
    cc = fx * fx + 1.0 + 4.0 * tau * tau
    w_f = (f + a * fx) / w
    w_fx = a * f / w
    w_ft = (ft + 2.0 * tau * a) / w
    P = ac / w
    Q = bc / w
    R = cc / w
    P_f = 2.0 * f / w - ac * w_f / w2
    P_fx = -ac * w_fx / w2
    P_ft = 2.0 * ft / w - ac * w_ft / w2
    Q_f = 2.0 * tau / w - bc * w_f / w2
    Q_fx = -ft / w - bc * w_fx / w2
    Q_ft = -fx / w - bc * w_ft / w2
    R_f = -cc * w_f / w2
    R_fx = 2.0 * fx / w - cc * w_fx / w2
    R_ft = -cc * w_ft / w2
    dx_u = ((P_f * fx + Q_f * ft) * fx
            + (P + P_fx * fx + Q_fx * ft) * fxx
            + (P_ft * fx + Q + Q_ft * ft) * fxt)
    dt_v = ((Q_f * fx + R_f * ft) * ft
            + (Q + Q_fx * fx + R_fx * ft) * fxt
            + (Q_ft * fx + R + R_ft * ft) * ftt)
    u = P * fx + Q * ft
    v = Q * fx + R * ft
    return dx_u + dt_v, u, v, w


def _lap_pointwise(f, fx, ft, fxx, fxt, ftt, tau):
    div, _, _, w = _flux_divergence(f, fx, ft, fxx, fxt, ftt, tau)
    return (f * f / w) * div


def _lap_pointwise_inverse(f, fx, ft, fxx, fxt, ftt, tau):
    # Delta(1/f) = -Delta(f)/f^2 + 2 |grad f|^2 / f^3 via the flux form
    div, u, v, w = _flux_divergence(f, fx, ft, fxx, fxt, ftt, tau)
    return -(f * f / w) * div / (f * f) + 2.0 * (u * fx + v * ft) / (f * w)


def laplacian_pointwise(j: Jet2, params: ModelParams) -> float:
    """Exact surface Laplacian of f at a jet (divergence-form expansion)."""
    return float(_lap_pointwise(j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt, params.tau))


def laplacian_pointwise_inverse(j: Jet2, params: ModelParams) -> float:
    """Exact surface Laplacian of 1/f at a jet."""
    return float(_lap_pointwise_inverse(j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt, params.tau))


def _closed_f(f, fx, ft, tau):
    w = _w(f, fx, ft, tau)
    return (f * f / w) * (1.0 - f / w + (f * fx * fx + 2.0 * tau * ft * fx) / w)


def _closed_inv(f, fx, ft, tau):
    w = _w(f, fx, ft, tau)
    return 2.0 / f - 1.0 / w - (f * (1.0 + fx * fx) + 2.0 * tau * fx * ft) / w ** 2


def _closed_inv_legacy(f, fx, ft, tau):
    # variant with /W on the quadratic term; kept only for the report
    w = _w(f, fx, ft, tau)
    return (w - f) / (f * w) + (ft * ft + 2.0 * tau * (f * fx * ft + 2.0 * tau * ft * ft)) / w


def laplacian_closed_forms(j: Jet2, params: ModelParams) -> tuple[float, float]:
    """First-order closed forms of (Delta f, Delta (1/f)) on H = 1/2 solutions.

    Valid only where the jet satisfies the graph equation; callers should
    hold |cmc_residual(j)| small.  The 1/f form carries W^2 under the
    quadratic term (the variant with W is in the discrepancy report).
    """
    tau = params.tau
    return (float(_closed_f(j.f, j.fx, j.ft, tau)),
            float(_closed_inv(j.f, j.fx, j.ft, tau)))


def _display_terms(f, fx, ft, fxx, fxt, ftt, tau, legacy):
    a = f * fx + 2.0 * tau * ft
    w2 = f * f + ft * ft + a * a
    w = np.sqrt(w2)
    second = (f * f) * ((f * f + ft * ft) * fxx
                        + 2.0 * (2.0 * tau * f - fx * ft) * fxt
                        + (fx * fx + 1.0 + 4.0 * tau * tau) * ftt)
    first = (a ** 3 + f ** 3 * fx) * fx
    if legacy:
        first = first + (a * fx - (1.0 + 4.0 * tau * tau) * f * ft) * ft
    else:
        first = first + (a * fx * ft - (1.0 + 4.0 * tau * tau) * f * ft) * ft
    sqrtg = w / (f * f)
    return (second + first) / (sqrtg * w ** 3)


def laplacian_display(j: Jet2, params: ModelParams) -> float:
    """Compact display of the general surface Laplacian (corrected grouping).

    Equals laplacian_pointwise on every jet; the last first-order group reads
    (a f_x f_t - (1+4tau^2) f f_t) f_t.
    """
    return float(_display_terms(j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt, params.tau, False))


def laplacian_display_legacy(j: Jet2, params: ModelParams) -> float:
    """Alternative grouping with (a f_x - (1+4tau^2) f f_t) f_t; diagnostic only."""
    return float(_display_terms(j.f, j.fx, j.ft, j.fxx, j.fxt, j.ftt, params.tau, True))


def laplacian_discrepancy_report(seed: int, samples: int = 500) -> dict:
    """Compare the compact Laplacian displays against the divergence form.

    Evaluates, on random general jets, both groupings of the compact display
    against the exact pointwise expansion, and, on random solution jets, both
    variants of the 1/f closed form.  Deviations are scale-relative.  The
    report never raises: it records which variants match.
    """
    rng = np.random.default_rng(seed)
    f, fx, ft, fxx, fxt, ftt = random_jets(rng, samples)
    taus = rng.uniform(-2.0, 2.0, samples)

    out = {
        "display_legacy_max": 0.0,
        "display_corrected_max": 0.0,
        "closed_inverse_legacy_max": 0.0,
        "closed_inverse_corrected_max": 0.0,
        "closed_direct_max": 0.0,
    }
    for n in range(samples):
        tau = float(taus[n])
        params = ModelParams(tau)
        j = Jet2(float(f[n]), float(fx[n]), float(ft[n]),
                 float(fxx[n]), float(fxt[n]), float(ftt[n]))
        exact = laplacian_pointwise(j, params)
        scale = max(1.0, abs(exact))
        out["display_legacy_max"] = max(
            out["display_legacy_max"], abs(laplacian_display_legacy(j, params) - exact) / scale)
        out["display_corrected_max"] = max(
            out["display_corrected_max"], abs(laplacian_display(j, params) - exact) / scale)

        sj = solution_jet(float(f[n]), float(fx[n]), float(ft[n]),
                          float(fxt[n]), float(ftt[n]), params)
        lap_exact = laplacian_pointwise(sj, params)
        lap_inv_exact = laplacian_pointwise_inverse(sj, params)
        cf, ci = laplacian_closed_forms(sj, params)
        scale_i = max(1.0, abs(lap_inv_exact))
        out["closed_direct_max"] = max(
            out["closed_direct_max"], abs(cf - lap_exact) / max(1.0, abs(lap_exact)))
        out["closed_inverse_corrected_max"] = max(
            out["closed_inverse_corrected_max"], abs(ci - lap_inv_exact) / scale_i)
        out["closed_inverse_legacy_max"] = max(
            out["closed_inverse_legacy_max"],
            abs(_closed_inv_legacy(sj.f, sj.fx, sj.ft, tau) - lap_inv_exact) / scale_i)

    tol = 1e-9
    for key in list(out):
        out[key] = float(out[key])
    out["display_legacy_matches"] = out["display_legacy_max"] <= tol
    out["display_corrected_matches"] = out["display_corrected_max"] <= tol
    out["closed_inverse_legacy_matches"] = out["closed_inverse_legacy_max"] <= tol
    out["closed_inverse_corrected_matches"] = out["closed_inverse_corrected_max"] <= tol
    return out


@dataclass(frozen=True)
class SurfaceField:
    """Samples of a graph on a uniform rectangular (x, t) grid; values > 0."""

    x: np.ndarray
    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)
        if x.ndim != 1 or t.ndim != 1 or v.shape != (x.size, t.size):
            raise ValueError("values must have shape (len(x), len(t))")
        if x.size < 3 or t.size < 3:
            raise ValueError("grid needs at least 3 nodes per axis")
        for nodes, name in ((x, "x"), (t, "t")):
            d = np.diff(nodes)
            if d[0] <= 0 or not np.allclose(d, d[0], rtol=1e-12, atol=0.0):
                raise ValueError(f"{name} nodes must be uniform and increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("field values must be finite")
        if np.any(v <= 0.0):
            raise DomainError("graph field values must be positive")

    @property
    def hx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def ht(self) -> float:
        return float(self.t[1] - self.t[0])


def laplace_beltrami(S: SurfaceField, phi: np.ndarray, params: ModelParams) -> np.ndarray:
    """Discrete surface Laplacian of phi on the metric induced by S.

    Divergence form with sqrt(g) g^{ij} evaluated from the field's first
    derivatives (np.gradient, one-sided at edges) and arithmetic means at
    the staggered half-nodes; mixed terms use the symmetric cross stencil.
    Second-order accurate.  Returns a full-shape array; the boundary ring,
    where the stencil does not fit, is NaN.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != S.values.shape:
        raise ValueError("phi must be sampled on the same grid as S")
    tau = params.tau
    f = S.values
    hx, ht = S.hx, S.ht
    fx = np.gradient(f, hx, axis=0, edge_order=2)
    ft = np.gradient(f, ht, axis=1, edge_order=2)
    w = _w(f, fx, ft, tau)
    P = (f * f + ft * ft) / w
    Q = (2.0 * tau * f - fx * ft) / w
    R = ((1.0 + 4.0 * tau * tau) + fx * fx) / w
    sg = w / (f * f)

    c = phi[1:-1, 1:-1]
    t1 = (0.5 * (P[1:-1, 1:-1] + P[2:, 1:-1]) * (phi[2:, 1:-1] - c)
          - 0.5 * (P[:-2, 1:-1] + P[1:-1, 1:-1]) * (c - phi[:-2, 1:-1])) / hx ** 2
    t2 = (0.5 * (R[1:-1, 1:-1] + R[1:-1, 2:]) * (phi[1:-1, 2:] - c)
          - 0.5 * (R[1:-1, :-2] + R[1:-1, 1:-1]) * (c - phi[1:-1, :-2])) / ht ** 2
    t3 = (Q[2:, 1:-1] * (phi[2:, 2:] - phi[2:, :-2])
          - Q[:-2, 1:-1] * (phi[:-2, 2:] - phi[:-2, :-2])) / (4.0 * hx * ht)
    t4 = (Q[1:-1, 2:] * (phi[2:, 2:] - phi[:-2, 2:])
          - Q[1:-1, :-2] * (phi[2:, :-2] - phi[:-2, :-2])) / (4.0 * hx * ht)

    out = np.full_like(phi, np.nan)
    out[1:-1, 1:-1] = (t1 + t2 + t3 + t4) / sg[1:-1, 1:-1]
    return out


def _wave_field(n: int) -> SurfaceField:
    h = 2.0 * np.pi / n
    x = np.arange(n) * h
    t = np.arange(n) * h
    f = 1.0 + 0.1 * np.sin(x)[:, None] * np.sin(t)[None, :]
    return SurfaceField(x, t, f)


def laplacian_refinement_errors(params: ModelParams, sizes=(32, 64, 128)) -> list[float]:
    """Sup errors of laplace_beltrami vs the exact pointwise Laplacian.

    Test graph f = 1 + 0.1 sin(x) sin(t) on [0, 2pi)^2 with phi = f; the
    oracle evaluates the exact pointwise expansion on the analytic jets.
    Successive halvings contract at second order.
    """
    errs = []
    for n in sizes:
        S = _wave_field(n)
        sx = np.sin(S.x)[:, None]
        cx = np.cos(S.x)[:, None]
        st = np.sin(S.t)[None, :]
        ct = np.cos(S.t)[None, :]
        f = S.values
        exact = _lap_pointwise(f, 0.1 * cx * st, 0.1 * sx * ct,
                               -0.1 * sx * st, 0.1 * cx * ct, -0.1 * sx * st,
                               params.tau)
        got = laplace_beltrami(S, f, params)
        errs.append(float(np.nanmax(np.abs(got - exact))))
    return errs


def identity_suite(seed: int, samples: int, tau: float | None = None) -> dict:
    """Max deviations of the jet-level identities on random draws."""
    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    cs = rng.uniform(0.1, 10.0, samples)
    taus = np.full(samples, tau) if tau is not None else rng.uniform(-2.0, 2.0, samples)
    f, fx, ft, fxx, fxt, ftt = random_jets(rng, samples)

    dev = {
        "horocylinder": 0.0,
        "w_coherence": 0.0,
        "equation_coherence": 0.0,
        "normal_norm": 0.0,
        "b12_symmetry": 0.0,
        "second_form_printed": 0.0,
        "curvature_bridge": 0.0,
    }
    for n in range(samples):
        params = ModelParams(float(taus[n]))
        dev["horocylinder"] = max(
            dev["horocylinder"],
            abs(mean_curvature(horocylinder_jet(float(cs[n])), params) - 0.5))

        j = Jet2(float(f[n]), float(fx[n]), float(ft[n]),
                 float(fxx[n]), float(fxt[n]), float(ftt[n]))
        # the two W expressions: f^2 (f_x + 2 tau lam f_t)^2 == (f f_x + 2 tau f_t)^2
        lam = 1.0 / j.f
        w_a = math.sqrt(j.f ** 2 + j.ft ** 2 + j.f ** 2 * (j.fx + 2.0 * params.tau * lam * j.ft) ** 2)
        w_b = gradient_w(j, params)
        dev["w_coherence"] = max(dev["w_coherence"], abs(w_a - w_b) / w_b)

        res1 = cmc_residual(j, params)
        res2 = mean_curvature_residual(j, 0.5, params)
        scale = max(1.0, abs(res1))
        dev["equation_coherence"] = max(dev["equation_coherence"], abs(res1 + res2) / scale)

        N = normal_frame(j, params)
        p = Point3(0.0, j.f, 0.0)
        n_coord = frame_at(p, params).T @ N
        norm2 = float(n_coord @ metric_at(p, params) @ n_coord)
        dev["normal_norm"] = max(dev["normal_norm"], abs(norm2 - 1.0))

        G = _connection_table(params.tau)
        c, d, dc_dx, dc_dt, dd_dx, dd_dt = _tangent_frame_data(j, params)
        b12_a = float(_covariant(c, d, dd_dx, G) @ N)
        b12_b = float(_covariant(d, c, dc_dt, G) @ N)
        dev["b12_symmetry"] = max(dev["b12_symmetry"], abs(b12_a - b12_b))

        printed = second_form_printed(j, params)
        unnorm = second_form_unnormalized(j, params)
        for pv, dv_ in zip(printed, unnorm):
            dev["second_form_printed"] = max(
                dev["second_form_printed"], abs(pv - dv_) / max(1.0, abs(dv_)))

        # dual route: 2 H of the cylinder vs the base curve's geodesic curvature
        cj = horocylinder_jet(float(cs[n]))
        kappa = base_horocycle_curvature(float(cs[n]))
        dev["curvature_bridge"] = max(
            dev["curvature_bridge"],
            abs(2.0 * mean_curvature(cj, params) - kappa))
    return dev
