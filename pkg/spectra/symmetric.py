"""
Elementary symmetric functions and the inequalities built on them.
Everything here is dtype-generic: float arrays, or object arrays of Fractions for exact evaluation.
"""

from math import comb
from typing import Iterable

import numpy as np

from core.errors import DomainError
from .types import as_values


def symmetric_polynomials(lam) -> np.ndarray:
    """Return S_0..S_n of the last axis, stacked on a new last axis.

    Uses the prefix recurrence E_j(k) = E_{j-1}(k) + lambda_j E_{j-1}(k-1).
    """
    lam = as_values(lam)
    n = lam.shape[-1]
    batch = lam.shape[:-1]
    e = [np.ones(batch, dtype=lam.dtype)] + [np.zeros(batch, dtype=lam.dtype) for _ in range(n)]
    for j in range(n):
        x = lam[..., j]
        for k in range(j + 1, 0, -1):
            e[k] = e[k] + x * e[k - 1]
    return np.stack(e, axis=-1)


def elementary_symmetric(lam, k: int):
    """S_k(lambda), with S_0 = 1 and S_{-1} = 0"""
    lam = as_values(lam)
    n = lam.shape[-1]
    if k < -1 or k > n:
        raise DomainError(f"k={k} outside [-1, {n}]")
    if k == -1:
        return np.zeros(lam.shape[:-1], dtype=lam.dtype)[()]
    return symmetric_polynomials(lam)[..., k][()]


def restricted_symmetric(lam, k: int, excluded: Iterable[int]):
    """S_k with the excluded entries set to zero; zero when an index repeats"""
    lam = as_values(lam)
    n = lam.shape[-1]
    excluded = list(excluded)
    for i in excluded:
        if i < 0 or i >= n:
            raise DomainError(f"index {i} out of range for n={n}")
    if k < -1 or k > n:
        raise DomainError(f"k={k} outside [-1, {n}]")
    if len(set(excluded)) != len(excluded):
        return np.zeros(lam.shape[:-1], dtype=lam.dtype)[()]
    masked = lam.copy()
    masked[..., excluded] = 0
    return elementary_symmetric(masked, k)


def newton_maclaurin_margin(lam) -> np.ndarray:
    """(S_k/C(n,k))^(1/k) - (S_{k+1}/C(n,k+1))^(1/(k+1)) for k = 1..n-1"""
    lam = as_values(lam).astype(np.float64)
    if np.any(lam <= 0):
        raise DomainError("Newton-Maclaurin margins need strictly positive eigenvalues")
    n = lam.shape[-1]
    s = symmetric_polynomials(lam)
    means = np.stack([(s[..., k] / comb(n, k)) ** (1.0 / k) for k in range(1, n + 1)], axis=-1)
    return means[..., :-1] - means[..., 1:]
