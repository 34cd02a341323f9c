"""Parity of the compiled kernels with the pure-numpy fallback."""
import os
import subprocess
import sys

import numpy as np
import pytest

from psl2cmc import _backend
from psl2cmc import _kernels_py as pure
from psl2cmc.annulus import AnnulusField, AnnulusSpec, PolarGrid
from psl2cmc.norms import weighted_norm
from psl2cmc.surface import random_jets

compiled = pytest.importorskip(
    "psl2cmc._kernels", reason="compiled extension not built")


def _jets(rng, n):
    f, fx, ft, fxx, fxt, ftt = random_jets(rng, n)
    return f, fx, ft, fxx, fxt, ftt


class TestBackendSelection:
    def test_compiled_backend_active(self):
        # the build installs the extension, so the default import uses it
        assert _backend.kernel_backend() == "compiled"
        assert _backend.cmc_residual_arrays is compiled.cmc_residual_arrays

    def test_env_override_selects_python(self):
        code = ("import psl2cmc; "
                "print(psl2cmc.kernel_backend())")
        env = dict(os.environ, PSL2CMC_PURE="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.returncode == 0
        assert out.stdout.strip() == "python"


class TestResidualParity:
    def test_random_jets_match(self, rng):
        f, fx, ft, fxx, fxt, ftt = _jets(rng, 5000)
        for tau in (0.0, 0.25, -1.7):
            a = compiled.cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, tau)
            b = pure.cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, tau)
            scale = np.maximum(1.0, np.abs(b))
            assert np.max(np.abs(a - b) / scale) <= 1e-12

    def test_2d_arrays_match(self, rng):
        shape = (40, 30)
        f = rng.uniform(0.2, 5.0, shape)
        fx, ft, fxx, fxt, ftt = (rng.uniform(-2.0, 2.0, shape)
                                 for _ in range(5))
        a = compiled.cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, 0.25)
        b = pure.cmc_residual_arrays(f, fx, ft, fxx, fxt, ftt, 0.25)
        assert a.shape == shape
        scale = np.maximum(1.0, np.abs(b))
        assert np.max(np.abs(a - b) / scale) <= 1e-12


class TestCoefficientParity:
    def test_random_jets_match(self, rng):
        f, fx, ft, _, _, _ = _jets(rng, 5000)
        for tau in (0.0, 0.25, -1.7):
            A = compiled.frozen_coefficients_arrays(f, fx, ft, tau)
            B = pure.frozen_coefficients_arrays(f, fx, ft, tau)
            assert len(A) == len(B) == 5
            for a, b in zip(A, B):
                scale = np.maximum(1.0, np.abs(b))
                assert np.max(np.abs(a - b) / scale) <= 1e-12


class TestHolderParity:
    @pytest.mark.parametrize("shape,window", [
        ((16, 16), 1),
        ((16, 16), 2),
        ((12, 40), 2),
        ((33, 17), 3),
    ])
    def test_random_fields_match(self, rng, shape, window):
        h11, h12, h22 = (rng.standard_normal(shape) for _ in range(3))
        x = rng.uniform(-5.0, 5.0, shape)
        t = rng.uniform(-5.0, 5.0, shape)
        a = compiled.holder_seminorm(h11, h12, h22, x, t, 0.5, window)
        b = pure.holder_seminorm(h11, h12, h22, x, t, 0.5, window)
        assert a.shape == shape
        scale = np.maximum(1.0, np.abs(b))
        assert np.max(np.abs(a - b) / scale) <= 1e-12

    def test_theta_wrap_is_symmetric(self, rng):
        # a lone Hessian spike in the first column must be felt by the
        # last columns through the periodic seam exactly as by the first
        n_t = 24
        h11 = np.zeros((10, n_t))
        h11[5, 0] = 1.0
        h12 = np.zeros_like(h11)
        h22 = np.zeros_like(h11)
        theta = np.arange(n_t) * (2.0 * np.pi / n_t)
        r = np.linspace(1.0, 2.0, 10)[:, None]
        x = r * np.cos(theta)[None, :]
        t = r * np.sin(theta)[None, :]
        for impl in (compiled, pure):
            q = impl.holder_seminorm(h11, h12, h22, x, t, 0.5, 2)
            assert q[5, n_t - 1] == pytest.approx(q[5, 1], rel=1e-12)
            assert q[5, n_t - 2] == pytest.approx(q[5, 2], rel=1e-12)
            assert q[5, 1] > 0.0


class TestEndToEndParity:
    def test_weighted_norm_matches_pure_subprocess(self):
        # the same norm evaluated with the forced-python backend in a
        # fresh interpreter must agree to rounding
        code = (
            "import numpy as np\n"
            "from psl2cmc.annulus import AnnulusSpec, PolarGrid, AnnulusField\n"
            "from psl2cmc.norms import weighted_norm\n"
            "import psl2cmc\n"
            "assert psl2cmc.kernel_backend() == 'python'\n"
            "spec = AnnulusSpec(1.0, 8.0, 0.02)\n"
            "g = PolarGrid(spec, 32, 64)\n"
            "rng = np.random.default_rng(99)\n"
            "v = 1.0 + 0.01 * rng.standard_normal(g.shape)\n"
            "print(repr(weighted_norm(AnnulusField(g, v))))\n"
        )
        env = dict(os.environ, PSL2CMC_PURE="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        pure_value = float(out.stdout.strip())

        spec = AnnulusSpec(1.0, 8.0, 0.02)
        g = PolarGrid(spec, 32, 64)
        rng = np.random.default_rng(99)
        v = 1.0 + 0.01 * rng.standard_normal(g.shape)
        here = weighted_norm(AnnulusField(g, v))
        assert here == pytest.approx(pure_value, rel=1e-12)
