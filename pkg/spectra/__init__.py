from .types import HermitianMatrix, Spectrum, as_values, as_matrix_array, unwrap
from .symmetric import (
    symmetric_polynomials,
    elementary_symmetric,
    restricted_symmetric,
    newton_maclaurin_margin,
)
from .pencil import (
    jacobi_eigenvalues,
    eigenvalues,
    relative_eigenvalues,
    relative_eigenvalue_field,
    pencil_reduction,
)
from .majorization import majorizes
from .sampling import (
    sample_rng,
    random_unitary,
    random_hermitian,
    random_kahler_form,
    with_relative_spectrum,
    reference_form,
)

__all__ = [
    'HermitianMatrix', 'Spectrum', 'as_values', 'as_matrix_array', 'unwrap',
    'symmetric_polynomials', 'elementary_symmetric', 'restricted_symmetric',
    'newton_maclaurin_margin', 'jacobi_eigenvalues', 'eigenvalues',
    'relative_eigenvalues', 'relative_eigenvalue_field', 'pencil_reduction',
    'majorizes', 'sample_rng', 'random_unitary', 'random_hermitian',
    'random_kahler_form', 'with_relative_spectrum', 'reference_form',
]
