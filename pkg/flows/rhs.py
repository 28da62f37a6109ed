"""
Right-hand sides of the three flows.

The pointwise rates act on relative spectra:
    gMA            1 - Q_c0(lam)
    perturbed gMA  1 + a_eps - Q_c0(lam) - eps / S_n(lam)
    dHYM           cot theta(lam) - cot theta*
``FlowEquation`` binds a configuration to these rates and to its admissibility guard.
"""

import math
from typing import Tuple

import numpy as np

from core.errors import DegenerateField, DegenerateSpectrum, PencilError, PhaseSingularity
from dhym import lagrangian_phase
from gma import GmaCoefficients, gma_q
from spectra import HermitianMatrix
from torus import (
    PotentialField,
    chi_from_potential,
    dhym_j_energy,
    gma_j_energy,
    ma_energy,
    perturbation_weight,
    relative_spectrum_field,
)
from .config import FlowConfig

PHASE_GUARD = 1e-12


def spectra_of(phi: PotentialField, background: HermitianMatrix, omega: HermitianMatrix,
               solver: str = "jacobi", dealias: bool = False) -> np.ndarray:
    return relative_spectrum_field(chi_from_potential(background, phi, dealias), omega, solver)


def gma_rate(lam: np.ndarray, coeffs: GmaCoefficients) -> np.ndarray:
    lowest = float(lam[..., 0].min())
    if lowest <= 0:
        raise DegenerateField(f"chi_t lost positivity (minimum eigenvalue {lowest:.3e})", minimum=lowest)
    return 1.0 - gma_q(lam, coeffs)


def perturbed_gma_rate(lam: np.ndarray, coeffs: GmaCoefficients, epsilon: float, a_epsilon: float) -> np.ndarray:
    base = gma_rate(lam, coeffs)
    if epsilon == 0:
        return base
    return base + a_epsilon - epsilon / np.prod(lam, axis=-1)


def dhym_rate(lam: np.ndarray, theta_star: float) -> np.ndarray:
    phase = lagrangian_phase(lam)
    if np.any(phase <= PHASE_GUARD) or np.any(phase >= np.pi - PHASE_GUARD):
        raise PhaseSingularity(f"phase left (0, pi): {np.min(phase):.6g}..{np.max(phase):.6g}")
    return 1.0 / np.tan(phase) - 1.0 / math.tan(theta_star)


def gma_rhs(phi: PotentialField, background: HermitianMatrix, omega: HermitianMatrix,
            coeffs: GmaCoefficients, solver: str = "jacobi") -> PotentialField:
    return PotentialField(phi.grid, gma_rate(spectra_of(phi, background, omega, solver), coeffs))


def perturbed_gma_rhs(phi: PotentialField, background: HermitianMatrix, omega: HermitianMatrix,
                      coeffs: GmaCoefficients, epsilon: float, solver: str = "jacobi") -> PotentialField:
    lam = spectra_of(phi, background, omega, solver)
    rate = perturbed_gma_rate(lam, coeffs, epsilon, perturbation_weight(background, omega, epsilon))
    return PotentialField(phi.grid, rate)


def dhym_rhs(phi: PotentialField, alpha: HermitianMatrix, omega: HermitianMatrix, theta_star: float,
             solver: str = "jacobi") -> PotentialField:
    return PotentialField(phi.grid, dhym_rate(spectra_of(phi, alpha, omega, solver), theta_star))


class GuardTripped(Exception):
    """A stage left the admissible set; the stepper halves dt and retries"""


class FlowEquation:
    """A configured flow: spectra, rates, the admissibility guard and the energies"""

    def __init__(self, config: FlowConfig):
        self.config = config
        self.grid = config.grid
        self.a_epsilon = config.a_epsilon

    def spectra(self, values: np.ndarray) -> np.ndarray:
        c = self.config
        return spectra_of(PotentialField(self.grid, values), c.background, c.omega, c.eigen_solver, c.dealias)

    def rate(self, lam: np.ndarray) -> np.ndarray:
        c = self.config
        if c.equation == "gma":
            return gma_rate(lam, c.coeffs)
        if c.equation == "perturbed-gma":
            return perturbed_gma_rate(lam, c.coeffs, c.epsilon, self.a_epsilon)
        return dhym_rate(lam, c.theta_star)

    def admissible(self, lam: np.ndarray) -> bool:
        c = self.config
        if c.is_gma:
            return float(lam[..., 0].min()) > c.delta_pos
        phase = lagrangian_phase(lam)
        return bool(phase.min() > c.phase_margin and phase.max() < np.pi - c.phase_margin)

    def evaluate(self, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(spectra, rate) at a potential, or GuardTripped"""
        if not np.all(np.isfinite(values)):
            raise GuardTripped("non-finite potential")
        try:
            lam = self.spectra(values)
            if not self.admissible(lam):
                raise GuardTripped("admissibility guard")
            return lam, self.rate(lam)
        except (DegenerateField, DegenerateSpectrum, PhaseSingularity, PencilError) as exc:
            raise GuardTripped(str(exc)) from exc

    def energy_i(self, phi: PotentialField) -> float:
        c = self.config
        if not c.is_gma:
            return math.nan
        return ma_energy(c.background, phi, c.omega, c.eigen_solver)

    def energy_j(self, phi: PotentialField) -> float:
        c = self.config
        if c.is_gma:
            return gma_j_energy(c.background, c.omega, c.coeffs, phi, c.energy_nodes, c.epsilon, c.eigen_solver)
        return dhym_j_energy(c.background, c.omega, c.theta_star, phi, c.energy_nodes, c.eigen_solver)

    def phase_extrema(self, lam: np.ndarray) -> Tuple[float, float]:
        if self.config.is_gma:
            return math.nan, math.nan
        phase = lagrangian_phase(lam)
        return float(phase.min()), float(phase.max())
