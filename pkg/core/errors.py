"""
Exception hierarchy shared by every package of the laboratory.
The CLI maps these onto exit codes; flow divergence is reported as a status instead.
"""

from typing import Optional, Tuple


class LabError(Exception):
    """Base class for all laboratory errors"""


class DomainError(LabError, ValueError):
    """Argument outside the domain of an operation"""


class PencilError(LabError):
    """The reference form of a matrix pencil is not positive definite"""


class DegenerateSpectrum(LabError):
    """Operator undefined at the given spectrum"""


class PhaseSingularity(LabError):
    """A phase reached 0 or pi where cot is singular"""


class DegenerateField(LabError):
    """A form field lost positivity (or admissible phase) somewhere on the grid"""

    def __init__(self, message: str, t: Optional[float] = None, minimum: Optional[float] = None):
        super().__init__(message)
        self.t = t
        self.minimum = minimum


class ResolutionError(LabError):
    """Requested scale is below the grid spacing"""


class GridMismatch(LabError):
    """Fields live on different grids"""


class CoefficientError(DomainError):
    """Equation data violating Setup constraints"""


class ConfigError(LabError):
    """Invalid run configuration"""


class ScheduleError(LabError):
    """A boundary-sweep index violates strict positivity of the intersection margins"""

    def __init__(self, index: int, p: int, subset: Tuple[int, ...], margin: float):
        super().__init__(
            f"schedule index {index} fails positivity: p={p}, V={list(subset)}, margin={margin:.6g}"
        )
        self.index = index
        self.p = p
        self.subset = tuple(subset)
        self.margin = margin
