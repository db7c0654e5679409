"""Lattice toolkit for gauge-coupled diffusion and exponential-interaction sampling.

Scalar fields cross the boundary as (nx, ny) arrays, space-time fields as
(nt, nx, ny), and link fields as (2, nx, ny); any array with the right total
size is accepted and reshaped. Site indices are row-major, site = ix * ny + iy.
"""

from ._core import (
    ActionKind,
    ActionSpec,
    CheckResult,
    Couplings,
    EnsembleEstimate,
    LatticeSpec,
    McConfig,
    McRun,
    MultiplierIdentity,
    ObservableSummary,
    SizeGuardError,
    accept_probability,
    action_value,
    canonical_z,
    curl,
    curl_constraint_identity,
    delta_source,
    det_ratio,
    divergence,
    dressed_kernel,
    estimate_kernel,
    evolve,
    evolve_similarity,
    free_kernel_exact,
    free_kernel_periodic,
    free_kernel_value,
    free_pinned_covariance,
    gauge_transform,
    gradient,
    grand_canonical_partial_sums,
    interaction_bound,
    interaction_scale,
    interaction_value,
    laplacian,
    metropolis_run,
    run_acceptance,
    sector_log_z,
    sector_log_z_bilinear,
    special_sources,
)

__version__ = "0.1.0"

__all__ = [
    "ActionKind",
    "ActionSpec",
    "CheckResult",
    "Couplings",
    "EnsembleEstimate",
    "LatticeSpec",
    "McConfig",
    "McRun",
    "MultiplierIdentity",
    "ObservableSummary",
    "SizeGuardError",
    "accept_probability",
    "action_value",
    "canonical_z",
    "curl",
    "curl_constraint_identity",
    "delta_source",
    "det_ratio",
    "divergence",
    "dressed_kernel",
    "estimate_kernel",
    "evolve",
    "evolve_similarity",
    "free_kernel_exact",
    "free_kernel_periodic",
    "free_kernel_value",
    "free_pinned_covariance",
    "gauge_transform",
    "gradient",
    "grand_canonical_partial_sums",
    "interaction_bound",
    "interaction_scale",
    "interaction_value",
    "laplacian",
    "metropolis_run",
    "run_acceptance",
    "sector_log_z",
    "sector_log_z_bilinear",
    "special_sources",
]
