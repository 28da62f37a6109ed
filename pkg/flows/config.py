"""
Flow and sweep configuration.

Configurations are frozen and validated on construction: the equation data
must match the grid dimension and the initial potential must be admissible
(chi_phi0 > 0 for the gMA flows, phase in (0, pi) for dHYM).
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.errors import ConfigError, PencilError
from dhym import DhymPhaseSpec, lagrangian_phase
from gma import GmaCoefficients
from spectra import HermitianMatrix
from torus import (
    GAUSS_NODES,
    PotentialField,
    TorusGrid,
    chi_from_potential,
    perturbation_weight,
    relative_spectrum_field,
)

EQUATIONS = ("gma", "perturbed-gma", "dhym")
EIGEN_SOLVERS = ("jacobi", "lapack")


@dataclass(frozen=True, eq=False)
class FlowConfig:
    """Everything a flow run needs.

    ``background`` is chi for the gMA flows and alpha for dHYM. The perturbed
    weight a_eps is derived from epsilon and the backgrounds, never supplied.
    """
    equation: str
    grid: TorusGrid
    background: HermitianMatrix
    omega: HermitianMatrix
    coeffs: Optional[GmaCoefficients] = None
    phase: Optional[DhymPhaseSpec] = None
    epsilon: float = 0.0
    initial: Optional[PotentialField] = None
    dt0: float = 0.01
    dt_min: float = 1e-9
    t_max: float = 50.0
    residual_target: float = 1e-5
    sample_every: float = 0.1
    step_tolerance: float = 1e-9
    delta_pos: float = 1e-6
    phase_margin: float = 1e-4
    patience: int = 5
    seed: int = 0
    eigen_solver: str = "jacobi"
    dealias: bool = False
    energy_nodes: int = GAUSS_NODES
    label: str = ""
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.equation not in EQUATIONS:
            raise ConfigError(f"unknown equation {self.equation!r}; expected one of {EQUATIONS}")
        if self.eigen_solver not in EIGEN_SOLVERS:
            raise ConfigError(f"unknown eigen solver {self.eigen_solver!r}")
        n = self.grid.n
        if self.background.n != n or self.omega.n != n:
            raise ConfigError(f"backgrounds must be {n}x{n} on an n={n} grid")
        if self.is_gma:
            if self.coeffs is None or self.coeffs.n != n:
                raise ConfigError(f"the {self.equation} flow needs coefficients for n={n}")
            if self.coeffs.c0 is None:
                raise ConfigError("the gMA flows need c0")
            if self.coeffs.c0_is_field and np.shape(self.coeffs.c0) != self.grid.shape:
                raise ConfigError(f"c0 field of shape {np.shape(self.coeffs.c0)} does not fit the grid")
        elif self.phase is None:
            raise ConfigError("the dHYM flow needs a target phase")
        if self.epsilon < 0:
            raise ConfigError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.epsilon and self.equation != "perturbed-gma":
            raise ConfigError("epsilon is only meaningful for the perturbed flow")
        if not 0 < self.dt_min <= self.dt0:
            raise ConfigError(f"need 0 < dt_min <= dt0, got dt_min={self.dt_min}, dt0={self.dt0}")
        if not (self.t_max > 0 and self.sample_every > 0 and self.residual_target > 0):
            raise ConfigError("t_max, sample_every and residual_target must be positive")
        if self.patience < 1:
            raise ConfigError("patience must be at least 1")
        if self.initial is None:
            object.__setattr__(self, "initial", PotentialField.constant(self.grid))
        else:
            self.grid.check_same(self.initial.grid)
        self._check_initial()

    def _check_initial(self):
        field = chi_from_potential(self.background, self.initial, self.dealias)
        try:
            lam = relative_spectrum_field(field, self.omega, self.eigen_solver)
        except PencilError as exc:
            raise ConfigError(str(exc)) from exc
        if self.is_gma:
            lowest = float(lam[..., 0].min())
            if lowest <= self.delta_pos:
                raise ConfigError(f"initial chi_phi is not positive (minimum eigenvalue {lowest:.3e})")
        else:
            phase = lagrangian_phase(lam)
            if phase.min() <= 0 or phase.max() >= np.pi:
                raise ConfigError("initial phase must lie in (0, pi) everywhere")

    @property
    def is_gma(self) -> bool:
        return self.equation != "dhym"

    @property
    def a_epsilon(self) -> float:
        if self.equation != "perturbed-gma":
            return 0.0
        return perturbation_weight(self.background, self.omega, self.epsilon)

    @property
    def theta_star(self) -> float:
        return self.phase.theta

    def with_initial(self, initial: PotentialField) -> "FlowConfig":
        return replace(self, initial=initial)

    def to_dict(self) -> Dict[str, Any]:
        """Config echo for run summaries"""
        out = {
            "equation": self.equation,
            "n": self.grid.n,
            "N": self.grid.N,
            "background": _matrix_echo(self.background),
            "omega": _matrix_echo(self.omega),
            "epsilon": self.epsilon,
            "a_epsilon": self.a_epsilon,
            "dt0": self.dt0,
            "dt_min": self.dt_min,
            "t_max": self.t_max,
            "residual_target": self.residual_target,
            "sample_every": self.sample_every,
            "step_tolerance": self.step_tolerance,
            "delta_pos": self.delta_pos,
            "phase_margin": self.phase_margin,
            "patience": self.patience,
            "seed": self.seed,
            "eigen_solver": self.eigen_solver,
            "dealias": self.dealias,
        }
        if self.coeffs is not None:
            out["coefficients"] = self.coeffs.to_dict()
        if self.phase is not None:
            out["phase"] = self.phase.to_dict()
        if self.label:
            out["label"] = self.label
        return {**out, **self.extras}


def _matrix_echo(matrix: HermitianMatrix) -> list:
    entries = matrix.entries
    if not np.any(entries.imag):
        return entries.real.tolist()
    return [[[z.real, z.imag] for z in row] for row in entries]


@dataclass(frozen=True, eq=False)
class SweepSchedule:
    """Boundary-sweep sequences, indexed from 1.

    chi_i = chi + s_i omega, omega_i = (1 + r_i) omega and c_{k,i} = c_k + t_i;
    all three sequences are nonnegative and nonincreasing. ``c0_profile`` is
    an optional grid field whose zero-mean part is added to the forced c0.
    """
    s: Tuple[float, ...]
    t: Tuple[float, ...] = ()
    r: Tuple[float, ...] = ()
    c0_profile: Optional[np.ndarray] = None
    warm_start: bool = True
    max_workers: int = 4

    def __post_init__(self):
        s = tuple(float(x) for x in self.s)
        if not s:
            raise ConfigError("a sweep needs at least one index")
        object.__setattr__(self, "s", s)
        for name in ("t", "r"):
            values = tuple(float(x) for x in getattr(self, name)) or (0.0,) * len(s)
            if len(values) != len(s):
                raise ConfigError(f"schedule sequence {name} has {len(values)} entries, expected {len(s)}")
            object.__setattr__(self, name, values)
        for name in ("s", "t", "r"):
            values = getattr(self, name)
            if min(values) < 0:
                raise ConfigError(f"schedule sequence {name} must be nonnegative")
            if any(b > a for a, b in zip(values, values[1:])):
                raise ConfigError(f"schedule sequence {name} must be nonincreasing")
        if self.max_workers < 1:
            raise ConfigError("max_workers must be positive")

    def __len__(self) -> int:
        return len(self.s)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "s": list(self.s),
            "t": list(self.t),
            "r": list(self.r),
            "c0_profile": self.c0_profile is not None,
            "warm_start": self.warm_start,
        }
