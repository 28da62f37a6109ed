"""
Pointwise gMA operators on eigenvalue vectors.

All functions accept a Spectrum, a plain vector, or an array whose last axis
holds the eigenvalues (grid evaluation). Object arrays of Fractions are
evaluated exactly.
"""

from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from core.errors import DegenerateSpectrum, DomainError
from core.reports import ConeReport
from spectra import as_values, symmetric_polynomials, unwrap
from .coefficients import C0Like, GmaCoefficients

EIGEN_TOL = 1e-12
VALUE_TOL = 1e-10
BISECT_XTOL = 1e-12


def _exact(lam: np.ndarray) -> bool:
    return lam.dtype == object


def _check_dimension(lam: np.ndarray, coeffs: GmaCoefficients) -> int:
    n = lam.shape[-1]
    if n != coeffs.n:
        raise DomainError(f"spectrum has {n} entries but the coefficients are for n={coeffs.n}")
    return n


def _masked_table(lam: np.ndarray, excluded: Tuple[int, ...]) -> np.ndarray:
    masked = lam.copy()
    masked[..., list(excluded)] = 0
    return symmetric_polynomials(masked)


def _resolve_c0(lam: np.ndarray, coeffs: GmaCoefficients, c0_value: Optional[C0Like]):
    c0 = coeffs.resolve_c0(c0_value)
    if _exact(lam):
        return Fraction(c0) if np.ndim(c0) == 0 else c0
    return np.asarray(c0, dtype=np.float64)


def _p_ratios(lam: np.ndarray, coeffs: GmaCoefficients, ell: int):
    """(excluded tuple, ratio, vanishing denominator) for every distinct ell-tuple"""
    n = coeffs.n
    weights = coeffs.weights(exact=_exact(lam))
    for excluded in combinations(range(n), ell):
        s = _masked_table(lam, excluded)
        numer = sum(weights[k - 1] * s[..., k - ell] for k in range(ell, n))
        denom = s[..., n - ell]
        zero = denom == 0
        ratio = numer / np.where(zero, 1, denom)
        ratio = np.where(zero, np.where(numer > 0, np.inf, -np.inf), ratio)
        yield excluded, ratio, zero


def gma_p(lam, coeffs: GmaCoefficients, ell: int = 1):
    """P^ell: the max over distinct ell-tuples of sum_k c_k/C(n,k) * S_{k-ell;I} / S_{n-ell;I}.

    A tuple with vanishing denominator contributes +inf, or nothing when its
    numerator vanishes too.
    """
    lam = as_values(lam)
    n = _check_dimension(lam, coeffs)
    if not 1 <= ell <= n - 1:
        raise DomainError(f"ell={ell} outside [1, {n - 1}]")
    if np.any(lam < -EIGEN_TOL):
        raise DomainError("P is defined on the nonnegative cone")
    batch = lam.shape[:-1]
    if coeffs.is_ma:
        return np.zeros(batch, dtype=lam.dtype)[()]

    best = None
    degenerate = np.ones(batch, dtype=bool)
    for _, ratio, zero in _p_ratios(lam, coeffs, ell):
        best = ratio if best is None else np.maximum(best, ratio)
        degenerate &= zero
    if np.any(degenerate):
        raise DegenerateSpectrum(f"every S_{{n-{ell}}} restriction vanishes")
    return unwrap(best)


def gma_q(lam, coeffs: GmaCoefficients, c0_value: Optional[C0Like] = None):
    """Q = sum_{k>=1} c_k/C(n,k) S_k/S_n + c0/S_n; the equation reads Q = 1"""
    lam = as_values(lam)
    n = _check_dimension(lam, coeffs)
    c0 = _resolve_c0(lam, coeffs, c0_value)
    s = symmetric_polynomials(lam)
    sn = s[..., n]
    if np.any(sn <= 0):
        raise DegenerateSpectrum("Q needs S_n > 0")
    weights = coeffs.weights(exact=_exact(lam))
    total = c0 + sum(w * s[..., k] for k, w in enumerate(weights, start=1))
    return unwrap(total / sn)


def c_subsolution_margin(lam, coeffs: GmaCoefficients):
    """1 - P^1; positive for strict C-subsolutions, zero on the degenerate boundary"""
    lam = as_values(lam)
    if coeffs.n == 1:
        return np.ones(lam.shape[:-1])[()]
    return 1 - gma_p(lam, coeffs, 1)


def _worst_tuple(lam: np.ndarray, coeffs: GmaCoefficients) -> Dict[str, Any]:
    """The excluded index whose ratio attains P^1 at a single spectrum"""
    excluded, ratio = max(((e, float(unwrap(r))) for e, r, _ in _p_ratios(lam, coeffs, 1)),
                          key=lambda pair: pair[1])
    return {"excluded": list(excluded), "ratio": ratio}


def gamma_bar_membership(lam, coeffs: GmaCoefficients) -> ConeReport:
    """Closed cone {lam >= 0, P^1(lam) <= 1}; the witness names the failing entry or tuple"""
    lam = as_values(lam)
    _check_dimension(lam, coeffs)
    lowest = lam.min()
    if lowest < -EIGEN_TOL:
        first = int(np.argmax(lam < -EIGEN_TOL))
        return ConeReport(False, float(lowest), witness={"index": first, "eigenvalue": lam[first]},
                          details={"violation": "negative eigenvalue", "index": first})
    try:
        p = 0.0 if coeffs.n == 1 else gma_p(lam, coeffs, 1)
    except DegenerateSpectrum:
        p = np.inf
    margin = min(float(lowest), 1.0 - float(p))
    is_member = float(p) <= 1.0 + EIGEN_TOL
    details = {"P": float(p)}
    if is_member:
        return ConeReport(True, margin, details=details)
    details["violation"] = "P exceeds 1"
    return ConeReport(False, margin, witness=_worst_tuple(lam, coeffs), details=details)


def p_subsets(n: int, p: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(n), p))


def tp_subset_coefficients(lam, coeffs: GmaCoefficients, p: int, c0_value: Optional[C0Like] = None) -> np.ndarray:
    """Eigenbasis coefficients of T^p, one per p-subset (ordered as ``p_subsets``).

    Each entry is n! e_p(lam_S) - sum_{k>=n-p} c_k k!(n-k)! e_{k-n+p}(lam_S),
    with c0 entering only for p = n.
    """
    lam = as_values(lam)
    n = _check_dimension(lam, coeffs)
    if not 1 <= p <= n:
        raise DomainError(f"p={p} outside [1, {n}]")
    exact = _exact(lam)
    c = [Fraction(ck) if exact else float(ck) for ck in coeffs.c]
    rows = []
    for subset in p_subsets(n, p):
        # the symmetric functions of lam_S are those of lam with the complement zeroed
        complement = tuple(i for i in range(n) if i not in subset)
        s = _masked_table(lam, complement)
        value = factorial(n) * s[..., p]
        for k in range(max(n - p, 1), n):
            value = value - c[k - 1] * factorial(k) * factorial(n - k) * s[..., k - n + p]
        if p == n:
            value = value - _resolve_c0(lam, coeffs, c0_value) * factorial(n)
        rows.append(value)
    return np.stack(rows, axis=-1)


def tp_positive(lam, coeffs: GmaCoefficients, p: int, c0_value: Optional[C0Like] = None):
    """Every T^p coefficient nonnegative; exact comparison on rational input"""
    coefficients = tp_subset_coefficients(lam, coeffs, p, c0_value)
    tol = 0 if coefficients.dtype == object else VALUE_TOL
    return unwrap(np.all(coefficients >= -tol, axis=-1))


def mass_lower_bound(coeffs: GmaCoefficients) -> float:
    """Certified lower bound for S_n on {lam >= 0, P(lam) <= 1}.

    Solves sum_k c_k/C(n,k) x^((k-n)/(n-1)) = 1, the Newton-Maclaurin fixed
    point, and returns x^(n/(n-1))/n. In the Monge-Ampere regime this is min c0.
    """
    if coeffs.is_ma:
        if coeffs.c0 is None:
            raise DomainError("all coefficients vanish and no c0 is given")
        return coeffs.c0_min()

    n = coeffs.n
    weights = coeffs.weights()

    def excess(x: float) -> float:
        return sum(w * x ** ((k - n) / (n - 1)) for k, w in enumerate(weights, start=1)) - 1.0

    lo, hi = 1.0, 1.0
    while excess(lo) < 0:
        lo /= 2.0
    while excess(hi) > 0:
        hi *= 2.0
    root = bisect(excess, lo, hi, xtol=BISECT_XTOL) if lo < hi else lo
    return root ** (n / (n - 1)) / n

