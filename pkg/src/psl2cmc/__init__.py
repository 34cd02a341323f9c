"""Numerical laboratory for constant mean curvature 1/2 horizontal graphs.

The ambient space is the half-plane model of the twisted product geometry
with bundle curvature tau; surfaces are graphs y = f(x, t) over the
vertical plane.  The package provides the ambient frame calculus, the jet
algebra of the graph equation, a log-polar Dirichlet solver on annuli, a
scale-weighted Hoelder norm, and a CLI wrapping the standard experiments.

Hot kernels run through a compiled extension when it is importable and
fall back to pure numpy otherwise; `kernel_backend()` reports which one is
active, and the environment variable PSL2CMC_PURE=1 forces the fallback.
"""
from ._backend import kernel_backend
from .errors import AssemblyError, DegeneracyError, DomainError, SolveError
from .geometry import (ModelParams, Point3, base_horocycle_curvature, check_suite,
                       connection_frame, frame_at, lie_bracket_frame, metric_at)
from .surface import (FormCoefficients, Jet2, SurfaceField, cmc_residual,
                      fundamental_forms, gradient_w, horocylinder_jet,
                      identity_suite, laplace_beltrami, laplacian_closed_forms,
                      laplacian_discrepancy_report, laplacian_pointwise,
                      laplacian_pointwise_inverse, laplacian_refinement_errors,
                      mean_curvature, mean_curvature_residual, normal_frame,
                      solution_jet)
from .annulus import (AnnulusField, AnnulusSpec, PolarGrid, SolveReport,
                      assemble_linear_system, barrier, barrier_field,
                      contract_check, discrete_residual, fixed_point_solve,
                      frozen_coefficients, interior_coefficients,
                      linearized_step, outer_radius_sweep, polar_cartesian_jet,
                      residual_field, scale_blocks, scale_cuts)
from .norms import admissibility_check, weighted_norm

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "kernel_backend",
    "AssemblyError", "DegeneracyError", "DomainError", "SolveError",
    "ModelParams", "Point3", "metric_at", "frame_at", "connection_frame",
    "lie_bracket_frame", "base_horocycle_curvature", "check_suite",
    "Jet2", "FormCoefficients", "SurfaceField", "fundamental_forms",
    "mean_curvature", "mean_curvature_residual", "cmc_residual", "gradient_w",
    "normal_frame", "horocylinder_jet", "solution_jet", "laplacian_pointwise",
    "laplacian_pointwise_inverse", "laplacian_closed_forms",
    "laplacian_discrepancy_report", "laplace_beltrami",
    "laplacian_refinement_errors", "identity_suite",
    "AnnulusSpec", "PolarGrid", "AnnulusField", "SolveReport", "barrier",
    "barrier_field", "frozen_coefficients", "contract_check",
    "polar_cartesian_jet", "interior_coefficients", "assemble_linear_system",
    "linearized_step", "discrete_residual",
    "residual_field", "fixed_point_solve", "scale_cuts", "scale_blocks",
    "outer_radius_sweep",
    "weighted_norm", "admissibility_check",
]
