"""Phase-space lattice kinetics: grids, kinetic right-hand sides and scenario runs."""

from ._dke import (
    ConfigError,
    GridSpec,
    InputError,
    PositivityError,
    Scenario,
    StepBoundError,
    classical_rhs,
    collision_rhs_screened,
    dbe_rhs,
    drift_apply,
    expand_plane_wave,
    fermi_dirac_field,
    hermiticity_defect,
    limit_study,
    meanfield_rhs,
    simulate,
    spectral_derivative_k,
    stream_d,
    verify_basis,
)

__all__ = [
    "ConfigError",
    "GridSpec",
    "InputError",
    "PositivityError",
    "Scenario",
    "StepBoundError",
    "classical_rhs",
    "collision_rhs_screened",
    "dbe_rhs",
    "drift_apply",
    "expand_plane_wave",
    "fermi_dirac_field",
    "hermiticity_defect",
    "limit_study",
    "meanfield_rhs",
    "simulate",
    "spectral_derivative_k",
    "stream_d",
    "verify_basis",
]
