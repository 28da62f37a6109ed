"""
Eigenvalues of Hermitian matrices and of pencils (chi, omega).

The solver is a batched cyclic Jacobi iteration: every matrix of a
(..., n, n) stack is rotated in lock-step, one (p, q) pair at a time.
"""

import logging
from typing import Tuple, Union

import numpy as np

from core.errors import DomainError, PencilError
from .types import HermitianMatrix, Spectrum, as_matrix_array

logger = logging.getLogger(__name__)

JACOBI_TOL = 1e-13
POSITIVITY_TOL = 1e-12
MAX_SWEEPS = 60


def _off_diagonal_norm(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=-1))


def _rotate(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """Apply the unitary rotation annihilating a[:, p, q]"""
    m, n, _ = a.shape
    apq = a[:, p, q]
    r = np.abs(apq)
    nonzero = r > 0
    safe_r = np.where(nonzero, r, 1.0)
    phase = np.where(nonzero, apq / safe_r, 1.0)

    app = a[:, p, p].real
    aqq = a[:, q, q].real
    tau = np.where(nonzero, (aqq - app) / (2.0 * safe_r), 0.0)
    sign = np.where(tau >= 0, 1.0, -1.0)
    t = np.where(nonzero, sign / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    v = np.tile(np.eye(n, dtype=np.complex128), (m, 1, 1))
    v[:, p, p] = c
    v[:, p, q] = s
    v[:, q, p] = -np.conj(phase) * s
    v[:, q, q] = np.conj(phase) * c
    return np.conj(np.swapaxes(v, -1, -2)) @ a @ v


def jacobi_eigenvalues(matrices, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Ascending eigenvalues of a stack of Hermitian matrices.

    Iterates cyclic sweeps until the off-diagonal Frobenius norm of every
    matrix is at most tol * max(1, ||A||_F).
    """
    a = np.array(as_matrix_array(matrices), dtype=np.complex128)
    n = a.shape[-1]
    batch = a.shape[:-2]
    a = a.reshape((-1, n, n))
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))

    if n > 1 and a.shape[0] > 0:
        scale = np.maximum(1.0, np.linalg.norm(a, axis=(-2, -1)))
        for _ in range(max_sweeps):
            active = _off_diagonal_norm(a) > tol * scale
            if not active.any():
                break
            sub = a[active]
            for p in range(n - 1):
                for q in range(p + 1, n):
                    sub = _rotate(sub, p, q)
            a[active] = sub
        else:
            logger.warning("Jacobi iteration hit %d sweeps without reaching tol=%g", max_sweeps, tol)

    w = np.sort(np.diagonal(a, axis1=-2, axis2=-1).real, axis=-1, kind="stable")
    return w.reshape(batch + (n,))


def eigenvalues(matrices, solver: str = "jacobi") -> np.ndarray:
    """Ascending eigenvalues with the chosen solver"""
    if solver == "jacobi":
        return jacobi_eigenvalues(matrices)
    if solver == "lapack":
        return np.linalg.eigvalsh(as_matrix_array(matrices))
    raise DomainError(f"unknown eigen solver {solver!r}")


def pencil_reduction(chi, omega, solver: str = "jacobi") -> Tuple[np.ndarray, np.ndarray]:
    """Return (L^{-1} chi L^{-*}, L) where omega = L L^* is the Cholesky factorization.

    omega is validated positive definite through its own eigenvalues first.
    """
    chi = as_matrix_array(chi)
    omega = as_matrix_array(omega)
    own = eigenvalues(omega, solver)
    floor = POSITIVITY_TOL * np.maximum(1.0, np.max(np.abs(own), axis=-1))
    if np.any(own[..., 0] <= floor):
        raise PencilError(f"omega is not positive definite (smallest eigenvalue {np.min(own[..., 0]):.3e})")
    try:
        lower = np.linalg.cholesky(omega)
    except np.linalg.LinAlgError as exc:
        raise PencilError(f"Cholesky factorization of omega failed: {exc}") from exc
    lower_inv = np.linalg.inv(lower)
    reduced = lower_inv @ chi @ np.conj(np.swapaxes(lower_inv, -1, -2))
    return reduced, lower


def relative_eigenvalue_field(chi, omega, solver: str = "jacobi") -> np.ndarray:
    """Ascending eigenvalues of omega^{-1} chi for stacks of matrices (broadcasting)"""
    reduced, _ = pencil_reduction(chi, omega, solver)
    return eigenvalues(reduced, solver)


def relative_eigenvalues(chi: Union[HermitianMatrix, np.ndarray],
                         omega: Union[HermitianMatrix, np.ndarray],
                         solver: str = "jacobi") -> Spectrum:
    """Spectrum of omega^{-1} chi for a single pair of matrices"""
    chi = as_matrix_array(chi)
    omega = as_matrix_array(omega)
    if chi.ndim != 2 or omega.ndim != 2:
        raise DomainError("relative_eigenvalues takes single matrices; use relative_eigenvalue_field for stacks")
    if chi.shape != omega.shape:
        raise DomainError(f"shape mismatch: {chi.shape} vs {omega.shape}")
    return Spectrum(relative_eigenvalue_field(chi, omega, solver))
