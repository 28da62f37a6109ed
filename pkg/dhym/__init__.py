from .phase import (
    DhymPhaseSpec,
    ComplexSlope,
    arccot,
    lagrangian_phase,
    truncated_phase,
    complex_slope,
)
from .operators import dhym_p, dhym_q, gamma_theta_margin, gamma_theta_membership
from .probes import (
    sample_gamma_theta,
    im_lower_bound_probe,
    phase_probe,
    shift_into_q_sublevel,
    PHASE_PROPERTIES,
)

__all__ = [
    'DhymPhaseSpec', 'ComplexSlope', 'arccot', 'lagrangian_phase',
    'truncated_phase', 'complex_slope', 'dhym_p', 'dhym_q',
    'gamma_theta_margin', 'gamma_theta_membership', 'sample_gamma_theta',
    'im_lower_bound_probe', 'phase_probe', 'shift_into_q_sublevel', 'PHASE_PROPERTIES',
]
