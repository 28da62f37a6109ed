from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np

from core.errors import DomainError

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class HermitianMatrix:
    """Coefficient matrix of a (1,1)-form at a point, or of a constant class"""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
            raise DomainError(f"expected a square matrix, got shape {entries.shape}")
        entries = entries.copy()
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_array(cls, data: Any, tol: float = HERMITIAN_TOL) -> "HermitianMatrix":
        """Ingest external data, checking Hermitian symmetry to within tol"""
        entries = np.asarray(data, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {entries.shape}")
        defect = np.max(np.abs(entries - entries.conj().T)) if entries.size else 0.0
        if defect > tol:
            raise DomainError(f"matrix is not Hermitian (defect {defect:.3e})")
        # exact symmetry from here on
        return cls(0.5 * (entries + entries.conj().T))

    @classmethod
    def identity(cls, n: int, scale: float = 1.0) -> "HermitianMatrix":
        return cls(scale * np.eye(n))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def is_diagonal(self) -> bool:
        return bool(np.all(self.entries[~np.eye(self.n, dtype=bool)] == 0))

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.entries + as_matrix_array(other))

    def __mul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix(self.entries * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalue vector; the argument of every pointwise operator"""
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.dtype != object:
            values = values.astype(np.float64)
            if not np.all(np.isfinite(values)):
                raise DomainError("spectrum entries must be finite")
        if values.ndim != 1 or values.size == 0:
            raise DomainError(f"spectrum must be a non-empty vector, got shape {values.shape}")
        if any(values[i] > values[i + 1] for i in range(values.size - 1)):
            raise DomainError("spectrum must be sorted ascending")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, values: Sequence[Any]) -> "Spectrum":
        """Build from unsorted values (stable ascending sort)"""
        arr = np.asarray(values)
        if arr.dtype != object:
            arr = arr.astype(np.float64)
        order = sorted(range(arr.size), key=lambda i: arr[i])
        return cls(arr[order])

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def tolist(self) -> list:
        return self.values.tolist()


def as_values(lam: Union[Spectrum, Sequence[Any], np.ndarray]) -> np.ndarray:
    """Eigenvalue array with the batch axes leading and the spectrum on the last axis.

    Rational (object dtype) input is kept as is so the generic operators stay exact.
    """
    if isinstance(lam, Spectrum):
        return lam.values
    arr = np.asarray(lam)
    if arr.dtype == object:
        return arr
    return arr.astype(np.float64, copy=False)


def as_matrix_array(matrix: Union[HermitianMatrix, np.ndarray]) -> np.ndarray:
    """Complex array of shape (..., n, n)"""
    if isinstance(matrix, HermitianMatrix):
        return matrix.entries
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2]:
        raise DomainError(f"expected (..., n, n) matrices, got shape {arr.shape}")
    return arr


def unwrap(value: Any) -> Any:
    """0-d arrays to scalars; ufuncs on single object spectra already return bare Fractions"""
    return value[()] if isinstance(value, np.ndarray) else value
