"""Jet-level curvature algebra and the intrinsic Laplacian."""
import math

import numpy as np
import pytest

from psl2cmc.errors import DomainError
from psl2cmc.geometry import ModelParams, Point3, frame_at, metric_at
from psl2cmc.surface import (
    Jet2,
    SurfaceField,
    cmc_residual,
    fundamental_forms,
    gradient_w,
    horocylinder_jet,
    identity_suite,
    laplace_beltrami,
    laplacian_closed_forms,
    laplacian_discrepancy_report,
    laplacian_display,
    laplacian_display_legacy,
    laplacian_pointwise,
    laplacian_pointwise_inverse,
    laplacian_refinement_errors,
    mean_curvature,
    mean_curvature_residual,
    normal_frame,
    random_jets,
    second_form_printed,
    second_form_unnormalized,
    solution_jet,
)


def _random_jet(rng) -> Jet2:
    f, fx, ft, fxx, fxt, ftt = random_jets(rng, 1)
    return Jet2(float(f[0]), float(fx[0]), float(ft[0]),
                float(fxx[0]), float(fxt[0]), float(ftt[0]))


class TestJet2:
    def test_defaults_are_zero_derivatives(self):
        j = Jet2(2.0)
        assert (j.fx, j.ft, j.fxx, j.fxt, j.ftt) == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_nonpositive_f_rejected(self):
        with pytest.raises(DomainError):
            Jet2(0.0)
        with pytest.raises(DomainError):
            Jet2(-1.0)

    def test_nonfinite_entry_rejected(self):
        with pytest.raises(DomainError):
            Jet2(1.0, fx=math.nan)
        with pytest.raises(DomainError):
            Jet2(1.0, ftt=math.inf)


class TestHorocylinder:
    def test_mean_curvature_is_half(self, rng):
        # constant graphs have H = 1/2 for every height and twist
        for _ in range(200):
            c = float(rng.uniform(0.1, 10.0))
            tau = float(rng.uniform(-2.0, 2.0))
            H = mean_curvature(horocylinder_jet(c), ModelParams(tau))
            assert H == pytest.approx(0.5, abs=1e-12)

    def test_jet_is_constant(self):
        j = horocylinder_jet(3.0)
        assert j.f == 3.0
        assert (j.fx, j.ft, j.fxx, j.fxt, j.ftt) == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_cmc_residual_vanishes(self, rng):
        for _ in range(50):
            c = float(rng.uniform(0.1, 10.0))
            tau = float(rng.uniform(-2.0, 2.0))
            res = cmc_residual(horocylinder_jet(c), ModelParams(tau))
            assert abs(res) <= 1e-10 * max(1.0, c ** 3)


class TestResidualAlgebra:
    def test_cmc_residual_is_negated_half_residual(self, rng):
        # the two residual routes share every term, so agreement is exact
        # up to rounding of the shared W^3/f^2 factor
        for _ in range(300):
            j = _random_jet(rng)
            tau = float(rng.uniform(-2.0, 2.0))
            params = ModelParams(tau)
            r1 = cmc_residual(j, params)
            r2 = mean_curvature_residual(j, 0.5, params)
            assert abs(r1 + r2) <= 1e-9 * max(1.0, abs(r1))

    def test_solution_jet_closes_the_equation(self, rng):
        # solution_jet back-solves f_xx, so the residual must vanish
        for _ in range(300):
            f = float(rng.uniform(0.2, 5.0))
            fx, ft, fxt, ftt = (float(v) for v in rng.uniform(-2.0, 2.0, 4))
            tau = float(rng.uniform(-2.0, 2.0))
            params = ModelParams(tau)
            j = solution_jet(f, fx, ft, fxt, ftt, params)
            w = gradient_w(j, params)
            assert abs(cmc_residual(j, params)) <= 1e-9 * max(1.0, w ** 3)

    def test_mean_curvature_consistent_with_residual(self, rng):
        # dual route: H from the form coefficients must zero the H-residual
        for _ in range(200):
            j = _random_jet(rng)
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            H = mean_curvature(j, params)
            w = gradient_w(j, params)
            res = mean_curvature_residual(j, H, params)
            assert abs(res) <= 1e-9 * max(1.0, w ** 3 / j.f ** 2)

    def test_gradient_w_two_expressions(self, rng):
        for _ in range(200):
            j = _random_jet(rng)
            tau = float(rng.uniform(-2.0, 2.0))
            a = j.f * j.fx + 2.0 * tau * j.ft
            direct = math.sqrt(j.f ** 2 + j.ft ** 2 + a ** 2)
            assert gradient_w(j, ModelParams(tau)) == pytest.approx(direct, rel=1e-14)


class TestNormalAndForms:
    def test_normal_has_unit_length(self, rng):
        for _ in range(200):
            j = _random_jet(rng)
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            N = normal_frame(j, params)
            p = Point3(0.0, j.f, 0.0)
            n_coord = frame_at(p, params).T @ N
            norm2 = float(n_coord @ metric_at(p, params) @ n_coord)
            assert norm2 == pytest.approx(1.0, abs=1e-12)

    def test_first_form_determinant(self, rng):
        # det g = W^2 / f^4 ties the form coefficients to the gradient
        for _ in range(200):
            j = _random_jet(rng)
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            forms = fundamental_forms(j, params)
            w = gradient_w(j, params)
            assert forms.det == pytest.approx(w ** 2 / j.f ** 4, rel=1e-10)

    def test_mixed_second_form_is_symmetric(self, rng):
        # b12 from differentiating d along x must equal the c-along-t route
        from psl2cmc.geometry import _connection_table
        from psl2cmc.surface import _covariant, _tangent_frame_data

        for _ in range(100):
            j = _random_jet(rng)
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            G = _connection_table(params.tau)
            c, d, dc_dx, dc_dt, dd_dx, dd_dt = _tangent_frame_data(j, params)
            N = normal_frame(j, params)
            b12_a = float(_covariant(c, d, dd_dx, G) @ N)
            b12_b = float(_covariant(d, c, dc_dt, G) @ N)
            assert abs(b12_a - b12_b) <= 1e-9 * max(1.0, abs(b12_a))

    def test_printed_second_form_matches_derivation(self, rng):
        # closed-form coefficients against the covariant-derivative route
        for _ in range(300):
            j = _random_jet(rng)
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            printed = second_form_printed(j, params)
            derived = second_form_unnormalized(j, params)
            for pv, dv in zip(printed, derived):
                assert abs(pv - dv) <= 1e-9 * max(1.0, abs(dv))


class TestLaplacianClosedForms:
    def test_constant_graph_gives_zero(self):
        for c in (0.3, 1.0, 4.0):
            for tau in (0.0, 0.25, -1.5):
                j = horocylinder_jet(c)
                lap_f, lap_inv = laplacian_closed_forms(j, ModelParams(tau))
                assert lap_f == pytest.approx(0.0, abs=1e-13)
                assert lap_inv == pytest.approx(0.0, abs=1e-13)

    def test_closed_forms_match_pointwise_on_solutions(self, rng):
        # the closed forms hold only on jets satisfying the graph equation
        for _ in range(200):
            f = float(rng.uniform(0.2, 5.0))
            fx, ft, fxt, ftt = (float(v) for v in rng.uniform(-2.0, 2.0, 4))
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            j = solution_jet(f, fx, ft, fxt, ftt, params)
            lap_f, lap_inv = laplacian_closed_forms(j, params)
            exact_f = laplacian_pointwise(j, params)
            exact_inv = laplacian_pointwise_inverse(j, params)
            assert abs(lap_f - exact_f) <= 1e-9 * max(1.0, abs(exact_f))
            assert abs(lap_inv - exact_inv) <= 1e-9 * max(1.0, abs(exact_inv))

    def test_display_grouping_matches_pointwise(self, rng):
        for _ in range(200):
            j = _random_jet(rng)
            params = ModelParams(float(rng.uniform(-2.0, 2.0)))
            exact = laplacian_pointwise(j, params)
            disp = laplacian_display(j, params)
            assert abs(disp - exact) <= 1e-9 * max(1.0, abs(exact))

    def test_legacy_variants_disagree(self):
        # the report records that the uncorrected groupings do not match
        rep = laplacian_discrepancy_report(seed=7, samples=200)
        assert rep["display_corrected_matches"] is True
        assert rep["closed_inverse_corrected_matches"] is True
        assert rep["display_legacy_matches"] is False
        assert rep["closed_inverse_legacy_matches"] is False
        assert rep["display_legacy_max"] > 1e-3
        assert rep["closed_inverse_legacy_max"] > 1e-3
        assert rep["closed_direct_max"] <= 1e-9

    def test_report_is_deterministic(self):
        a = laplacian_discrepancy_report(seed=11, samples=60)
        b = laplacian_discrepancy_report(seed=11, samples=60)
        assert a == b


class TestSurfaceField:
    def test_shape_mismatch_rejected(self):
        x = np.linspace(0.0, 1.0, 5)
        t = np.linspace(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            SurfaceField(x, t, np.ones((4, 5)))

    def test_nonuniform_nodes_rejected(self):
        x = np.array([0.0, 0.1, 0.3, 0.6])
        t = np.linspace(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            SurfaceField(x, t, np.ones((4, 4)))

    def test_decreasing_nodes_rejected(self):
        x = np.linspace(1.0, 0.0, 4)
        t = np.linspace(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            SurfaceField(x, t, np.ones((4, 4)))

    def test_too_few_nodes_rejected(self):
        x = np.linspace(0.0, 1.0, 2)
        t = np.linspace(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            SurfaceField(x, t, np.ones((2, 4)))

    def test_nonpositive_values_rejected(self):
        x = np.linspace(0.0, 1.0, 4)
        v = np.ones((4, 4))
        v[2, 2] = 0.0
        with pytest.raises(DomainError):
            SurfaceField(x, x, v)

    def test_nonfinite_values_rejected(self):
        x = np.linspace(0.0, 1.0, 4)
        v = np.ones((4, 4))
        v[1, 1] = np.nan
        with pytest.raises(DomainError):
            SurfaceField(x, x, v)

    def test_spacing_properties(self):
        x = np.linspace(0.0, 2.0, 5)
        t = np.linspace(0.0, 3.0, 7)
        S = SurfaceField(x, t, np.ones((5, 7)))
        assert S.hx == pytest.approx(0.5)
        assert S.ht == pytest.approx(0.5)


class TestLaplaceBeltrami:
    def _field(self, n=24):
        x = np.linspace(-1.0, 1.0, n)
        t = np.linspace(-1.0, 1.0, n)
        X, T = np.meshgrid(x, t, indexing="ij")
        return SurfaceField(x, t, 1.0 + 0.1 * np.sin(X) * np.sin(T))

    def test_constant_function_maps_to_zero(self):
        S = self._field()
        out = laplace_beltrami(S, np.full(S.values.shape, 3.7), ModelParams(0.25))
        interior = out[1:-1, 1:-1]
        assert np.all(np.isfinite(interior))
        # differencing a constant cancels exactly, before any scaling
        assert np.max(np.abs(interior)) == 0.0

    def test_boundary_ring_is_nan(self):
        S = self._field()
        out = laplace_beltrami(S, S.values.copy(), ModelParams(0.0))
        assert np.all(np.isnan(out[0, :]))
        assert np.all(np.isnan(out[-1, :]))
        assert np.all(np.isnan(out[:, 0]))
        assert np.all(np.isnan(out[:, -1]))

    def test_shape_mismatch_rejected(self):
        S = self._field()
        with pytest.raises(ValueError):
            laplace_beltrami(S, np.ones((3, 3)), ModelParams(0.0))

    def test_refinement_is_second_order(self):
        # halving h divides the defect by about 4
        errs = laplacian_refinement_errors(ModelParams(0.25), sizes=(32, 64, 128))
        assert len(errs) == 3
        r1 = errs[0] / errs[1]
        r2 = errs[1] / errs[2]
        assert 3.2 <= r1 <= 4.8
        assert 3.2 <= r2 <= 4.8


class TestIdentitySuite:
    def test_gates_and_determinism(self):
        a = identity_suite(seed=123, samples=150)
        b = identity_suite(seed=123, samples=150)
        assert a == b
        assert a["horocylinder"] <= 1e-12
        assert a["w_coherence"] <= 1e-12
        assert a["equation_coherence"] <= 1e-9
        assert a["normal_norm"] <= 1e-12
        assert a["b12_symmetry"] <= 1e-9
        assert a["second_form_printed"] <= 1e-9
        assert a["curvature_bridge"] <= 1e-6

    def test_tau_zero_variant(self):
        dev = identity_suite(seed=5, samples=100, tau=0.0)
        assert dev["horocylinder"] <= 1e-12
        assert dev["equation_coherence"] <= 1e-9
        assert dev["curvature_bridge"] <= 1e-6

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            identity_suite(seed=1, samples=0)
