"""
Spectral complex derivatives on the torus.

With phi = sum_m phi_hat(m) exp(2 pi i m.x), the operators
d/dz_j = (d/dx_j - i d/dy_j)/2 and d/dzbar_k = (d/dx_k + i d/dy_k)/2 have
symbols pi i (m_xj - i m_yj) and pi i (m_xk + i m_yk).
"""

from typing import Optional

import numpy as np
from scipy import fft

from spectra import HermitianMatrix, as_matrix_array
from .grid import FormField, PotentialField, TorusGrid


def _dealias_mask(grid: TorusGrid) -> np.ndarray:
    """Two-thirds rule: keep modes with |m| <= N/3 on every axis"""
    keep = np.ones(grid.shape, dtype=bool)
    for m in grid.modes():
        keep = keep & (np.abs(m) <= grid.N / 3)
    return keep


def _forward(phi: PotentialField, dealias: bool) -> np.ndarray:
    coefficients = fft.fftn(phi.values)
    if dealias:
        coefficients = coefficients * _dealias_mask(phi.grid)
    return coefficients


def _holomorphic_symbols(grid: TorusGrid):
    modes = grid.modes()
    return [modes[2 * j] - 1j * modes[2 * j + 1] for j in range(grid.n)]


def i_ddbar(phi: PotentialField, dealias: bool = False) -> np.ndarray:
    """Entries d^2 phi / dz_j dzbar_k, shape grid.shape + (n, n), Hermitian and mean-free"""
    grid = phi.grid
    coefficients = _forward(phi, dealias)
    a = _holomorphic_symbols(grid)
    out = np.empty(grid.shape + (grid.n, grid.n), dtype=np.complex128)
    for j in range(grid.n):
        for k in range(j, grid.n):
            symbol = -np.pi ** 2 * a[j] * np.conj(a[k])
            entry = fft.ifftn(symbol * coefficients)
            if j == k:
                out[..., j, j] = entry.real
            else:
                out[..., j, k] = entry
                out[..., k, j] = np.conj(entry)
    return out


def chi_from_potential(background: HermitianMatrix, phi: PotentialField, dealias: bool = False) -> FormField:
    return FormField(phi.grid, background, i_ddbar(phi, dealias))


def dz(phi: PotentialField) -> np.ndarray:
    """(1,0)-gradient d phi / dz_j, shape grid.shape + (n,); Nyquist modes dropped"""
    grid = phi.grid
    coefficients = fft.fftn(phi.values)
    nyquist = np.zeros(grid.shape, dtype=bool)
    for m in grid.modes():
        nyquist = nyquist | (np.abs(m) == grid.N // 2)
    coefficients = np.where(nyquist, 0.0, coefficients)
    a = _holomorphic_symbols(grid)
    return np.stack([fft.ifftn(1j * np.pi * a[j] * coefficients) for j in range(grid.n)], axis=-1)


def _trace_symbol(grid: TorusGrid, omega) -> np.ndarray:
    inverse = np.linalg.inv(as_matrix_array(omega))
    a = _holomorphic_symbols(grid)
    symbol = np.zeros(grid.shape)
    for j in range(grid.n):
        for k in range(grid.n):
            symbol = symbol + (-np.pi ** 2 * inverse[k, j] * a[j] * np.conj(a[k])).real
    return symbol


def laplacian(phi: PotentialField, omega: Optional[HermitianMatrix] = None) -> PotentialField:
    """tr_omega(i ddbar phi) for a constant omega"""
    grid = phi.grid
    omega = omega if omega is not None else HermitianMatrix.identity(grid.n)
    values = fft.ifftn(_trace_symbol(grid, omega) * fft.fftn(phi.values)).real
    return PotentialField(grid, values)


def solve_ddbar_trace(f: PotentialField, omega: Optional[HermitianMatrix] = None) -> PotentialField:
    """The mean-zero phi with tr_omega(i ddbar phi) = f - mean f"""
    grid = f.grid
    omega = omega if omega is not None else HermitianMatrix.identity(grid.n)
    symbol = _trace_symbol(grid, omega)
    zero = symbol == 0
    coefficients = fft.fftn(f.values) / np.where(zero, 1.0, symbol)
    coefficients[zero] = 0.0
    return PotentialField(grid, fft.ifftn(coefficients).real)
