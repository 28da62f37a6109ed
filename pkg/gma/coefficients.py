from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from numbers import Real
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import CoefficientError, DomainError

C0Like = Union[Real, np.ndarray]


def _is_scalar(value: Any) -> bool:
    return isinstance(value, Real) or (isinstance(value, np.ndarray) and value.ndim == 0)


@dataclass(frozen=True, eq=False)
class GmaCoefficients:
    """Equation data c_1..c_{n-1} and c_0 of the generalized Monge-Ampere equation.

    ``c0`` is a constant or a grid-sampled field; ``c0_floor`` is the admissible
    negative floor, zero unless configured.
    """
    n: int
    c: Tuple[Any, ...] = ()
    c0: Optional[C0Like] = None
    c0_floor: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise CoefficientError(f"dimension must be positive, got {self.n}")
        c = tuple(self.c)
        if len(c) != self.n - 1:
            raise CoefficientError(f"expected {self.n - 1} coefficients c_1..c_{self.n - 1}, got {len(c)}")
        for k, ck in enumerate(c, start=1):
            if ck < 0:
                raise CoefficientError(f"c_{k} = {ck} is negative")
        if self.c0_floor < 0:
            raise CoefficientError("c0_floor must be nonnegative")
        object.__setattr__(self, "c", c)

        if self.c0 is None:
            return
        c0 = self.c0 if _is_scalar(self.c0) else np.asarray(self.c0, dtype=np.float64)
        object.__setattr__(self, "c0", c0)
        if np.min(c0) < -self.c0_floor:
            raise CoefficientError(f"c0 dips to {np.min(c0):.6g}, below the floor -{self.c0_floor}")
        if self.is_ma:
            if np.min(c0) <= 0:
                raise CoefficientError("Monge-Ampere regime (all c_k = 0) needs c0 > 0 everywhere")
        elif np.mean(c0) < 0:
            raise CoefficientError(f"mixed regime needs a nonnegative c0 integral, got mean {np.mean(c0):.6g}")

    @classmethod
    def unchecked(cls, n: int, c: Sequence[Any], c0: Optional[C0Like] = None,
                  c0_floor: float = 0.0) -> "GmaCoefficients":
        """Build without validation; only for constructing counterexamples"""
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "c", tuple(c))
        object.__setattr__(obj, "c0", c0)
        object.__setattr__(obj, "c0_floor", c0_floor)
        return obj

    @property
    def is_ma(self) -> bool:
        return all(ck == 0 for ck in self.c)

    @property
    def regime(self) -> str:
        return "MA" if self.is_ma else "mixed"

    def weights(self, exact: bool = False) -> Tuple[Any, ...]:
        """c_k / C(n,k) for k = 1..n-1; Fractions when exact"""
        if exact:
            return tuple(Fraction(ck) / comb(self.n, k) for k, ck in enumerate(self.c, start=1))
        return tuple(float(ck) / comb(self.n, k) for k, ck in enumerate(self.c, start=1))

    @property
    def c0_is_field(self) -> bool:
        return self.c0 is not None and not _is_scalar(self.c0)

    def resolve_c0(self, c0_value: Optional[C0Like] = None) -> C0Like:
        value = self.c0 if c0_value is None else c0_value
        if value is None:
            raise DomainError("c0 is required here but was not supplied")
        return value

    def c0_min(self) -> float:
        return float(np.min(self.resolve_c0()))

    def c0_mean(self) -> float:
        return float(np.mean(self.resolve_c0()))

    def with_c0(self, c0: Optional[C0Like]) -> "GmaCoefficients":
        return replace(self, c0=c0)

    def shifted(self, t: float) -> "GmaCoefficients":
        """c_k + t for every k >= 1 (c0 dropped; it is recomputed by the caller)"""
        return GmaCoefficients(self.n, tuple(ck + t for ck in self.c), None, self.c0_floor)

    def to_dict(self) -> Dict[str, Any]:
        c0 = self.c0
        if isinstance(c0, np.ndarray):
            c0 = {"field": True, "min": float(np.min(c0)), "mean": float(np.mean(c0))}
        elif c0 is not None:
            c0 = float(c0)
        return {"n": self.n, "c": [float(ck) for ck in self.c], "c0": c0, "c0_floor": self.c0_floor}

