"""Cross-diffusion tumor-immune reaction-diffusion model (C++ core)."""

from ._core import (
    ArgumentError,
    BlowUpError,
    BracketError,
    BranchLostError,
    ConvergenceError,
    CrossdiffError,
    DomainError,
    Equilibrium,
    HopfResult,
    ModelParams,
    NegativityError,
    Snapshot,
    State,
    __version__,
    cce_solve,
    cfe,
    classify,
    critical_d32,
    cycle_metrics,
    dispersion_relation,
    existence_region,
    hopf_scan,
    integrate,
    jacobian,
    pattern_class,
    pattern_report,
    preset,
    quintic_coeffs,
    reaction_rhs,
    simulate,
    stationarity,
)


def coexistence(params):
    """Coexistence equilibrium with the largest tumor density, or None."""
    roots = cce_solve(params)
    return roots[-1] if roots else None
