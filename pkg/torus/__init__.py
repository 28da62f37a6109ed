from .grid import TorusGrid, PotentialField, FormField
from .spectral import i_ddbar, chi_from_potential, dz, laplacian, solve_ddbar_trace
from .measure import (
    MollifierSpec,
    integrate,
    l1_distance,
    linf_distance,
    mollify,
    normalize_sup,
    relative_spectrum_field,
    volume,
    wedge_ratio,
)
from .energy import (
    GAUSS_NODES,
    ma_energy,
    ma_energy_gradient,
    gma_j_energy,
    gma_j_gradient,
    dhym_j_energy,
    dhym_j_gradient,
    f_form_pairing,
    perturbation_weight,
)
from .intersection import IntersectionReport, SubtorusMargin, intersection_numbers
from .snapshot import (
    encode_snapshot,
    decode_snapshot,
    write_snapshot,
    read_snapshot,
    snapshot_frame,
    write_snapshot_csv,
    read_potential_csv,
)

__all__ = [
    'TorusGrid', 'PotentialField', 'FormField', 'i_ddbar', 'chi_from_potential',
    'dz', 'laplacian', 'solve_ddbar_trace', 'MollifierSpec', 'integrate',
    'l1_distance', 'linf_distance', 'mollify', 'normalize_sup',
    'relative_spectrum_field', 'volume', 'wedge_ratio', 'GAUSS_NODES',
    'ma_energy', 'ma_energy_gradient', 'gma_j_energy', 'gma_j_gradient',
    'dhym_j_energy', 'dhym_j_gradient', 'f_form_pairing', 'perturbation_weight',
    'IntersectionReport', 'SubtorusMargin', 'intersection_numbers',
    'encode_snapshot', 'decode_snapshot', 'write_snapshot', 'read_snapshot',
    'snapshot_frame', 'write_snapshot_csv', 'read_potential_csv',
]
