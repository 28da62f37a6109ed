"""
Intersection numbers of constant classes on coordinate subtori.

For a p-dimensional coordinate subtorus V the positivity number is
n!/p! [chi]^p.V - sum_{k>=1} c_k k!/(k-n+p)! [chi]^(k-n+p) [omega]^(n-k).V.
Constant forms expand multilinearly: [chi]^a [omega]^b on V equals
a! b! det(omega_V) e_a(mu_V), with mu_V the eigenvalues of chi_V relative
to omega_V.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial, prod
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import weave

from core.errors import DomainError
from gma import GmaCoefficients
from spectra import (
    HermitianMatrix,
    as_matrix_array,
    pencil_reduction,
    relative_eigenvalue_field,
    symmetric_polynomials,
)

logger = logging.getLogger(__name__)

COMMUTATOR_TOL = 1e-12


@dataclass(frozen=True)
class SubtorusMargin:
    p: int
    subset: Tuple[int, ...]
    value: float

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "subset": list(self.subset), "margin": self.value}


@dataclass(frozen=True)
class IntersectionReport:
    margins: List[SubtorusMargin]
    forced_c0: float
    exact: bool
    basis: str
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def min_margin(self) -> float:
        return min(m.value for m in self.margins)

    @property
    def first_failure(self) -> Optional[SubtorusMargin]:
        """First margin that is not strictly positive, in (p, subset) order"""
        return next((m for m in self.margins if not m.value > 0), None)

    @property
    def positive(self) -> bool:
        return self.first_failure is None

    def to_dict(self) -> Dict[str, Any]:
        failure = self.first_failure
        return {
            "forced_c0": self.forced_c0,
            "exact": self.exact,
            "basis": self.basis,
            "min_margin": self.min_margin,
            "positive": self.positive,
            "first_failure": failure.to_dict() if failure else None,
            "margins": [m.to_dict() for m in self.margins],
            **self.details,
        }


def _subset_margin(mu, volume, n: int, p: int, c) -> Any:
    s = symmetric_polynomials(np.asarray(mu, dtype=object if isinstance(volume, Fraction) else np.float64))
    value = factorial(n) * s[p]
    for k in range(max(n - p, 1), n):
        value = value - c[k - 1] * factorial(k) * factorial(n - k) * s[k - n + p]
    return volume * value


def _forced_c0(lam, n: int, weights) -> Any:
    s = symmetric_polynomials(lam)
    return s[n] - sum(w * s[k] for k, w in enumerate(weights, start=1))


def _commutator(chi: np.ndarray, omega: np.ndarray) -> float:
    return float(np.max(np.abs(chi @ omega - omega @ chi)))


@weave.op()
def intersection_numbers(chi: HermitianMatrix, omega: HermitianMatrix, coeffs: GmaCoefficients,
                         reduce_pencil: bool = False) -> IntersectionReport:
    """Positivity numbers for every p = 1..n and coordinate p-subtorus, and the forced c0.

    Diagonal backgrounds are evaluated in exact rational arithmetic. Commuting
    backgrounds use the coordinate subtori as given; otherwise the pencil
    eigenbasis is used when ``reduce_pencil`` is set.
    """
    n = coeffs.n
    chi_arr, omega_arr = as_matrix_array(chi), as_matrix_array(omega)
    if chi_arr.shape != (n, n) or omega_arr.shape != (n, n):
        raise DomainError(f"backgrounds must be {n}x{n} matrices")
    commutator = _commutator(chi_arr, omega_arr)
    exact = False
    if chi.is_diagonal() and omega.is_diagonal():
        exact = True
        basis = "coordinates"
        chi_d = [Fraction(float(x)) for x in np.diagonal(chi_arr).real]
        omega_d = [Fraction(float(x)) for x in np.diagonal(omega_arr).real]
        if min(omega_d) <= 0:
            raise DomainError("omega must be positive definite")
        c = [Fraction(ck) for ck in coeffs.c]
        lam = np.array([x / w for x, w in zip(chi_d, omega_d)], dtype=object)
        volume = prod(omega_d)

        def restrict(subset):
            vol = Fraction(1)
            for i in subset:
                vol *= omega_d[i]
            return [lam[i] for i in subset], vol

        forced = _forced_c0(lam, n, coeffs.weights(exact=True))
    elif commutator < COMMUTATOR_TOL:
        basis = "coordinates"
        c = [float(ck) for ck in coeffs.c]
        lam = relative_eigenvalue_field(chi_arr, omega_arr)
        volume = float(np.linalg.det(omega_arr).real)

        def restrict(subset):
            index = np.ix_(subset, subset)
            sub_omega = omega_arr[index]
            return relative_eigenvalue_field(chi_arr[index], sub_omega), float(np.linalg.det(sub_omega).real)

        forced = _forced_c0(lam, n, coeffs.weights())
    elif reduce_pencil:
        basis = "pencil"
        c = [float(ck) for ck in coeffs.c]
        reduced, _ = pencil_reduction(chi_arr, omega_arr, solver="lapack")
        lam = np.linalg.eigvalsh(reduced)
        # unit-volume eigenbasis: omega becomes the identity, chi diagonal
        volume = 1.0

        def restrict(subset):
            return lam[list(subset)], 1.0

        forced = _forced_c0(lam, n, coeffs.weights())
    else:
        raise DomainError(
            f"backgrounds do not commute (commutator {commutator:.3e}); pass reduce_pencil=True"
        )

    margins = []
    for p in range(1, n + 1):
        for subset in combinations(range(n), p):
            mu, vol = restrict(subset)
            value = _subset_margin(mu, vol, n, p, c)
            margins.append(SubtorusMargin(p, subset, float(value)))

    details = {"commutator": commutator, "volume": float(volume)}
    if exact:
        details["forced_c0_exact"] = str(forced)
    # c0 enters the equation as a ratio against omega^n
    report = IntersectionReport(margins, float(forced), exact, basis, details=details)
    logger.debug("intersection numbers: min margin %.6g, forced c0 %.6g", report.min_margin, report.forced_c0)
    return report
