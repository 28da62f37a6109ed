"""
Grids, potentials and form fields on the flat torus C^n / (Z + iZ)^n.

Array axes follow the real coordinates in the order x1, y1, x2, y2, ...
with period 1 on every axis; a form field carries two extra trailing axes
for its (j, k-bar) entries.
"""

from dataclasses import dataclass
from typing import Callable, Tuple, Union

import numpy as np

from core.errors import DomainError, GridMismatch
from spectra import HermitianMatrix, as_matrix_array

SUPPORTED_DIMENSIONS = (1, 2, 3)
MIN_POINTS = 8
HESSIAN_MEAN_TOL = 1e-8


@dataclass(frozen=True)
class TorusGrid:
    n: int
    N: int

    def __post_init__(self):
        if self.n not in SUPPORTED_DIMENSIONS:
            raise DomainError(f"complex dimension {self.n} not in {SUPPORTED_DIMENSIONS}")
        if self.N < MIN_POINTS or self.N % 2:
            raise DomainError(f"N must be even and at least {MIN_POINTS}, got {self.N}")

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.N,) * (2 * self.n)

    @property
    def spacing(self) -> float:
        return 1.0 / self.N

    @property
    def size(self) -> int:
        return self.N ** (2 * self.n)

    def axis(self) -> np.ndarray:
        return np.arange(self.N) * self.spacing

    def coordinates(self) -> Tuple[Tuple[np.ndarray, ...], Tuple[np.ndarray, ...]]:
        """(x, y): the real and imaginary coordinate arrays of every complex direction"""
        mesh = np.meshgrid(*([self.axis()] * (2 * self.n)), indexing="ij")
        return tuple(mesh[0::2]), tuple(mesh[1::2])

    def modes(self) -> Tuple[np.ndarray, ...]:
        """Integer wavenumbers per real axis, shaped to broadcast against the grid"""
        m = np.fft.fftfreq(self.N, d=1.0 / self.N)
        out = []
        for a in range(2 * self.n):
            shape = [1] * (2 * self.n)
            shape[a] = self.N
            out.append(m.reshape(shape))
        return tuple(out)

    def check_same(self, other: "TorusGrid"):
        if self != other:
            raise GridMismatch(f"grid mismatch: {self} vs {other}")


@dataclass(frozen=True, eq=False)
class PotentialField:
    """Real scalar function sampled on a torus grid"""
    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            raise DomainError(f"values of shape {values.shape} do not fit grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("potential values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, grid: TorusGrid, value: float = 0.0) -> "PotentialField":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: TorusGrid, fn: Callable[[Tuple[np.ndarray, ...], Tuple[np.ndarray, ...]], np.ndarray]) -> "PotentialField":
        """Sample fn(x, y), where x and y are tuples of coordinate arrays"""
        x, y = grid.coordinates()
        return cls(grid, np.broadcast_to(fn(x, y), grid.shape))

    def mean(self) -> float:
        return float(self.values.mean())

    def max(self) -> float:
        return float(self.values.max())

    def min(self) -> float:
        return float(self.values.min())

    def _other(self, other: Union["PotentialField", float]):
        if isinstance(other, PotentialField):
            self.grid.check_same(other.grid)
            return other.values
        return other

    def __add__(self, other):
        return PotentialField(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PotentialField(self.grid, self.values - self._other(other))

    def __mul__(self, other):
        return PotentialField(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return PotentialField(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class FormField:
    """chi + i ddbar phi: a constant background plus a zero-mean Hessian part"""
    grid: TorusGrid
    background: HermitianMatrix
    hessian: np.ndarray

    def __post_init__(self):
        if self.background.n != self.grid.n:
            raise DomainError(f"background is {self.background.n}x{self.background.n} on an n={self.grid.n} grid")
        hessian = np.asarray(self.hessian, dtype=np.complex128)
        expected = self.grid.shape + (self.grid.n, self.grid.n)
        if hessian.shape != expected:
            raise DomainError(f"hessian of shape {hessian.shape}, expected {expected}")
        axes = tuple(range(2 * self.grid.n))
        scale = max(1.0, float(np.max(np.abs(hessian)))) if hessian.size else 1.0
        if np.max(np.abs(hessian.mean(axis=axes))) > HESSIAN_MEAN_TOL * scale:
            raise DomainError("the i ddbar part of a form field must have zero mean")
        hessian = hessian.copy()
        hessian.setflags(write=False)
        object.__setattr__(self, "hessian", hessian)

    @classmethod
    def constant(cls, grid: TorusGrid, background: HermitianMatrix) -> "FormField":
        return cls(grid, background, np.zeros(grid.shape + (grid.n, grid.n), dtype=np.complex128))

    @property
    def matrices(self) -> np.ndarray:
        """Pointwise matrices, shape grid.shape + (n, n)"""
        return as_matrix_array(self.background) + self.hessian

    def mean(self) -> np.ndarray:
        return self.matrices.mean(axis=tuple(range(2 * self.grid.n)))
