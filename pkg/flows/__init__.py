from .config import FlowConfig, SweepSchedule, EQUATIONS, EIGEN_SOLVERS
from .state import FlowState, RunRecord, COLUMNS, STATUSES
from .rhs import (
    FlowEquation,
    GuardTripped,
    spectra_of,
    gma_rhs,
    perturbed_gma_rhs,
    dhym_rhs,
)
from .integrator import initial_state, refresh_stability, spectral_radius, stable_dt, step
from .run import run, uniqueness_probe, UniquenessReport, mass_matched
from .sweep import boundary_sweep, SweepReport, SweepIndex

__all__ = [
    'FlowConfig', 'SweepSchedule', 'EQUATIONS', 'EIGEN_SOLVERS', 'FlowState',
    'RunRecord', 'COLUMNS', 'STATUSES', 'FlowEquation', 'GuardTripped',
    'spectra_of', 'gma_rhs', 'perturbed_gma_rhs', 'dhym_rhs', 'initial_state',
    'refresh_stability', 'spectral_radius', 'stable_dt', 'step', 'run',
    'uniqueness_probe', 'UniquenessReport', 'mass_matched',
    'boundary_sweep', 'SweepReport', 'SweepIndex',
]
