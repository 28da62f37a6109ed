"""
Energy functionals on potentials and their gradient densities.

Every functional is normalized by the omega^n-volume, so the gradient
densities below pair with directions through ``integrate``:
dE(phi)(psi) = integrate(psi, gradient(phi)).
"""

import logging
from math import comb
from typing import Iterator, Optional, Tuple

import numpy as np
import weave

from core.errors import DegenerateField, DomainError, PencilError
from dhym import complex_slope, lagrangian_phase
from gma import GmaCoefficients
from spectra import HermitianMatrix, as_matrix_array, relative_eigenvalue_field, symmetric_polynomials
from .grid import PotentialField
from .measure import integrate, relative_spectrum_field
from .spectral import chi_from_potential, dz

logger = logging.getLogger(__name__)

GAUSS_NODES = 16


def _path(nodes: int) -> Iterator[Tuple[float, float]]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]"""
    x, w = np.polynomial.legendre.leggauss(nodes)
    return zip(((x + 1.0) / 2.0).tolist(), (w / 2.0).tolist())


def _positive_spectra(background: HermitianMatrix, omega: HermitianMatrix, phi: PotentialField,
                      solver: str, t: Optional[float] = None) -> np.ndarray:
    lam = relative_spectrum_field(chi_from_potential(background, phi), omega, solver)
    lowest = float(lam[..., 0].min())
    if lowest <= 0:
        raise DegenerateField(f"chi_phi is not positive (minimum eigenvalue {lowest:.3e})", t=t, minimum=lowest)
    return lam


def _admissible_phase(alpha: HermitianMatrix, omega: HermitianMatrix, phi: PotentialField,
                      solver: str, t: Optional[float] = None) -> np.ndarray:
    lam = relative_spectrum_field(chi_from_potential(alpha, phi), omega, solver)
    phase = lagrangian_phase(lam)
    distance = float(min(phase.min(), np.pi - phase.max()))
    if distance <= 0:
        raise DegenerateField(f"phase left (0, pi) (distance {distance:.3e})", t=t, minimum=distance)
    return lam


def perturbation_weight(background: HermitianMatrix, omega: HermitianMatrix, epsilon: float) -> float:
    """a_eps = eps * int omega^n / int chi^n for constant backgrounds"""
    ratio = np.linalg.det(np.linalg.solve(as_matrix_array(omega), as_matrix_array(background))).real
    return float(epsilon / ratio)


def ma_energy_gradient(background: HermitianMatrix, phi: PotentialField,
                       omega: Optional[HermitianMatrix] = None, solver: str = "jacobi") -> PotentialField:
    """chi_phi^n / omega^n"""
    omega = omega if omega is not None else HermitianMatrix.identity(phi.grid.n)
    lam = _positive_spectra(background, omega, phi, solver)
    return PotentialField(phi.grid, np.prod(lam, axis=-1))


@weave.op()
def ma_energy(background: HermitianMatrix, phi: PotentialField,
              omega: Optional[HermitianMatrix] = None, solver: str = "jacobi") -> float:
    """I(phi) = 1/(n+1) sum_j int phi chi^j ^ chi_phi^(n-j), with I(0) = 0.

    The mixed densities are det(omega^-1 chi_phi) e_j(mu)/C(n,j), where mu are
    the eigenvalues of chi relative to chi_phi.
    """
    n = phi.grid.n
    omega = omega if omega is not None else HermitianMatrix.identity(n)
    field = chi_from_potential(background, phi)
    lam = _positive_spectra(background, omega, phi, solver)
    try:
        mu = relative_eigenvalue_field(as_matrix_array(background), field.matrices, solver)
    except PencilError as exc:
        raise DegenerateField(str(exc), minimum=float(lam[..., 0].min())) from exc
    volume_phi = np.prod(lam, axis=-1)
    s = symmetric_polynomials(mu)
    total = sum(integrate(phi, volume_phi * s[..., j] / comb(n, j)) for j in range(n + 1))
    return total / (n + 1)


def gma_j_gradient(background: HermitianMatrix, omega: HermitianMatrix, coeffs: GmaCoefficients,
                   phi: PotentialField, epsilon: float = 0.0, solver: str = "jacobi",
                   t: Optional[float] = None) -> PotentialField:
    """sum_k c_k S_k/C(n,k) + c0 - S_n, plus eps - a_eps S_n for the perturbed functional"""
    n = phi.grid.n
    lam = _positive_spectra(background, omega, phi, solver, t)
    s = symmetric_polynomials(lam)
    density = coeffs.resolve_c0() - s[..., n]
    for k, w in enumerate(coeffs.weights(), start=1):
        density = density + w * s[..., k]
    if epsilon:
        density = density + epsilon - perturbation_weight(background, omega, epsilon) * s[..., n]
    return PotentialField(phi.grid, np.broadcast_to(density, phi.grid.shape))


@weave.op()
def gma_j_energy(background: HermitianMatrix, omega: HermitianMatrix, coeffs: GmaCoefficients,
                 phi: PotentialField, nodes: int = GAUSS_NODES, epsilon: float = 0.0,
                 solver: str = "jacobi") -> float:
    """J(phi) = int_0^1 dt int phi (Q(lam_tphi) - 1) S_n(lam_tphi), with J(0) = 0"""
    return sum(w * integrate(phi, gma_j_gradient(background, omega, coeffs, phi * t, epsilon, solver, t=t))
               for t, w in _path(nodes))


def dhym_j_gradient(alpha: HermitianMatrix, omega: HermitianMatrix, theta: float, phi: PotentialField,
                    solver: str = "jacobi", t: Optional[float] = None) -> PotentialField:
    """Im(exp(-i theta) prod(lam_j + i))"""
    slope = complex_slope(_admissible_phase(alpha, omega, phi, solver, t))
    return PotentialField(phi.grid, np.cos(theta) * slope.im - np.sin(theta) * slope.re)


@weave.op()
def dhym_j_energy(alpha: HermitianMatrix, omega: HermitianMatrix, theta: float, phi: PotentialField,
                  nodes: int = GAUSS_NODES, solver: str = "jacobi") -> float:
    return sum(w * integrate(phi, dhym_j_gradient(alpha, omega, theta, phi * t, solver, t=t))
               for t, w in _path(nodes))


def f_form_pairing(chi: HermitianMatrix, omega: HermitianMatrix, phi: PotentialField, k: int) -> float:
    """int i dphi ^ dbar phi ^ (k chi^(k-1) ^ omega^(n-k) - (chi^k ^ omega^(n-k) / chi^n) n chi^(n-1)) / omega^n.

    Evaluated in the simultaneous eigenbasis of the constant pair; the
    bracketed form is nonpositive, so the result is <= 0 up to rounding.
    """
    n = phi.grid.n
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside [1, {n}]")
    lower_inv = np.linalg.inv(np.linalg.cholesky(as_matrix_array(omega)))
    lam, unitary = np.linalg.eigh(lower_inv @ as_matrix_array(chi) @ np.conj(lower_inv.T))
    if lam[0] <= 0:
        raise DegenerateField("chi must be positive", minimum=float(lam[0]))
    gradient = dz(phi) @ (np.conj(unitary.T) @ lower_inv).T
    weights = np.empty(n)
    s = symmetric_polynomials(lam)
    for j in range(n):
        others = symmetric_polynomials(np.delete(lam, j))
        weights[j] = (others[k - 1] - s[k] * others[n - 1] / s[n]) / comb(n, k)
    density = np.sum(np.abs(gradient) ** 2 * weights, axis=-1)
    logger.debug("F-form pairing k=%d: bracket weights %s", k, weights)
    return float(density.mean())
