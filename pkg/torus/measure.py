"""
Grid quadrature, distances, pointwise wedge ratios and mollification.

Integrals are reported as ratios against the total volume of omega^n (the
grid mean) unless ``absolute`` is set, in which case they are multiplied by
det omega, the omega^n-volume of the unit torus.
"""

from dataclasses import dataclass
from math import comb
from typing import Optional, Union

import numpy as np
from scipy import fft

from core.errors import DomainError, ResolutionError
from spectra import HermitianMatrix, as_matrix_array, relative_eigenvalue_field, symmetric_polynomials
from .grid import FormField, PotentialField, TorusGrid


Density = Union[PotentialField, np.ndarray, float, None]


def volume(omega: Optional[HermitianMatrix]) -> float:
    if omega is None:
        return 1.0
    return float(np.linalg.det(as_matrix_array(omega)).real)


def _density_values(f: PotentialField, density: Density):
    if density is None:
        return 1.0
    if isinstance(density, PotentialField):
        f.grid.check_same(density.grid)
        return density.values
    return density


def integrate(f: PotentialField, density: Density = None, omega: Optional[HermitianMatrix] = None,
              absolute: bool = False) -> float:
    """Mean of f * density; on the periodic uniform grid this is the trapezoidal rule"""
    value = float(np.mean(f.values * _density_values(f, density)))
    if absolute:
        value *= volume(omega)
    return value


def l1_distance(a: PotentialField, b: PotentialField, omega: Optional[HermitianMatrix] = None,
                absolute: bool = False) -> float:
    a.grid.check_same(b.grid)
    return integrate(PotentialField(a.grid, np.abs(a.values - b.values)), omega=omega, absolute=absolute)


def linf_distance(a: PotentialField, b: PotentialField) -> float:
    a.grid.check_same(b.grid)
    return float(np.max(np.abs(a.values - b.values)))


def normalize_sup(phi: PotentialField) -> PotentialField:
    return PotentialField(phi.grid, phi.values - phi.values.max())


def relative_spectrum_field(field: FormField, omega: HermitianMatrix, solver: str = "jacobi") -> np.ndarray:
    """Ascending relative eigenvalues at every grid point, shape grid.shape + (n,)"""
    return relative_eigenvalue_field(field.matrices, as_matrix_array(omega), solver)


def wedge_ratio(field: FormField, omega: HermitianMatrix, k: int, solver: str = "jacobi") -> PotentialField:
    """chi^k ^ omega^(n-k) / omega^n = S_k(lam)/C(n,k) pointwise"""
    n = field.grid.n
    if not 0 <= k <= n:
        raise DomainError(f"k={k} outside [0, {n}]")
    if k == 0:
        return PotentialField.constant(field.grid, 1.0)
    lam = relative_spectrum_field(field, omega, solver)
    return PotentialField(field.grid, symmetric_polynomials(lam)[..., k] / comb(n, k))


@dataclass(frozen=True)
class MollifierSpec:
    """Bump exp(-1/(1-r^2)) of radius delta, normalized to unit mass on the grid"""
    delta: float

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"mollifier radius must be positive, got {self.delta}")

    def kernel(self, grid: TorusGrid) -> np.ndarray:
        if self.delta < grid.spacing:
            raise ResolutionError(f"delta={self.delta} below the grid spacing {grid.spacing}")
        offsets = np.minimum(np.arange(grid.N), grid.N - np.arange(grid.N)) * grid.spacing
        mesh = np.meshgrid(*([offsets] * (2 * grid.n)), indexing="ij")
        r2 = sum(axis ** 2 for axis in mesh) / self.delta ** 2
        inside = r2 < 1.0
        weights = np.zeros(grid.shape)
        weights[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
        weights /= weights.sum()
        return weights


def mollify(phi: PotentialField, spec: MollifierSpec) -> PotentialField:
    """Periodic convolution with the discrete bump; the grid mean is preserved"""
    kernel = spec.kernel(phi.grid)
    values = fft.ifftn(fft.fftn(phi.values) * fft.fftn(kernel)).real
    return PotentialField(phi.grid, values)
