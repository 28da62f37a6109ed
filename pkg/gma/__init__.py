from .coefficients import GmaCoefficients
from .operators import (
    gma_p,
    gma_q,
    gamma_bar_membership,
    p_subsets,
    tp_subset_coefficients,
    tp_positive,
    c_subsolution_margin,
    mass_lower_bound,
)
from .probes import (
    convexity_monotonicity_probe,
    sample_gamma_bar,
    mass_bound_probe,
    ell_monotone_probe,
    tp_equivalence_probe,
    reference_form,
)

__all__ = [
    'GmaCoefficients', 'gma_p', 'gma_q', 'gamma_bar_membership', 'p_subsets',
    'tp_subset_coefficients', 'tp_positive', 'c_subsolution_margin',
    'mass_lower_bound', 'convexity_monotonicity_probe', 'sample_gamma_bar',
    'mass_bound_probe', 'ell_monotone_probe', 'tp_equivalence_probe',
    'reference_form',
]
