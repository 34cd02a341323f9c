"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-numpy module
is the fallback.  Set PSL2CMC_PURE=1 to force the fallback (used by the
benchmark and the parity tests).
"""
import os

_force_pure = os.environ.get("PSL2CMC_PURE", "").strip() not in ("", "0")

if _force_pure:
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

cmc_residual_arrays = _impl.cmc_residual_arrays
frozen_coefficients_arrays = _impl.frozen_coefficients_arrays
holder_seminorm = _impl.holder_seminorm


def kernel_backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return BACKEND
