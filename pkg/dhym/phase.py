"""
Lagrangian phases and complex slopes of eigenvalue vectors.
arccot takes values in (0, pi) throughout, evaluated as pi/2 - arctan.
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from core.errors import CoefficientError, DomainError
from spectra import as_values


@dataclass(frozen=True)
class DhymPhaseSpec:
    """Supercritical phase window 0 < theta <= Theta < pi"""
    theta: float
    Theta: float
    c0_floor: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.theta <= self.Theta < np.pi:
            raise CoefficientError(f"need 0 < theta <= Theta < pi, got theta={self.theta}, Theta={self.Theta}")
        if self.c0_floor < 0:
            raise CoefficientError("c0_floor must be nonnegative")

    @property
    def target_level(self) -> float:
        """-cot theta, the right-hand side of the twisted equation"""
        return -np.cos(self.theta) / np.sin(self.theta)

    def to_dict(self) -> Dict[str, Any]:
        return {"theta": self.theta, "Theta": self.Theta, "c0_floor": self.c0_floor}


@dataclass(frozen=True)
class ComplexSlope:
    """Real and imaginary parts of prod_j (lambda_j + i); arrays for batched input"""
    re: Any
    im: Any

    @property
    def modulus(self):
        return np.hypot(self.re, self.im)

    @property
    def argument(self):
        return np.arctan2(self.im, self.re)

    def as_complex(self):
        return np.asarray(self.re) + 1j * np.asarray(self.im)

    def tolist(self) -> list:
        return [float(self.re), float(self.im)]


def arccot(x):
    return np.pi / 2 - np.arctan(x)


def lagrangian_phase(lam):
    """sum_i arccot lambda_i, in (0, n pi)"""
    return np.sum(arccot(as_values(lam).astype(np.float64)), axis=-1)[()]


def truncated_phase(lam, ell: int = 1):
    """Largest arccot sum over n - ell entries: the n - ell smallest eigenvalues"""
    lam = np.sort(as_values(lam).astype(np.float64), axis=-1)
    n = lam.shape[-1]
    if not 1 <= ell <= n - 1:
        raise DomainError(f"ell={ell} outside [1, {n - 1}]")
    return np.sum(arccot(lam[..., : n - ell]), axis=-1)[()]


def complex_slope(lam) -> ComplexSlope:
    lam = as_values(lam).astype(np.float64)
    product = np.ones(lam.shape[:-1], dtype=np.complex128)
    for j in range(lam.shape[-1]):
        product = product * (lam[..., j] + 1j)
    return ComplexSlope(product.real[()], product.imag[()])
