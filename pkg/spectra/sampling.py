"""
Seeded random Hermitian data for the sampling campaigns.
Each sample draws from its own stream keyed by (seed, index), so a campaign
gives the same answers whatever order or batch size it is evaluated in.
"""

import numpy as np


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase of R divided out"""
    q, r = np.linalg.qr(_complex_gaussian(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    a = _complex_gaussian(rng, (n, n))
    return 0.5 * scale * (a + a.conj().T)


def random_kahler_form(rng: np.random.Generator, n: int) -> np.ndarray:
    """Well-conditioned positive definite reference form"""
    m = _complex_gaussian(rng, (n, n))
    return m @ m.conj().T / n + np.eye(n)


def with_relative_spectrum(omega: np.ndarray, values: np.ndarray, unitary: np.ndarray) -> np.ndarray:
    """Hermitian A whose eigenvalues relative to omega are exactly ``values``.

    Broadcasts over leading axes of ``values`` and ``unitary``.
    """
    lower = np.linalg.cholesky(omega)
    values = np.asarray(values, dtype=np.float64)
    inner = (unitary * values[..., None, :]) @ np.conj(np.swapaxes(unitary, -1, -2))
    a = lower @ inner @ np.conj(np.swapaxes(lower, -1, -2))
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


REFERENCE_STREAM = 2 ** 32


def reference_form(n: int, seed: int) -> np.ndarray:
    """The fixed omega of a sampling campaign"""
    return random_kahler_form(sample_rng(seed, REFERENCE_STREAM), n)
