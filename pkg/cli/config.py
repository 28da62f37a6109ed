"""
Run configuration files: JSON documents validated with pydantic before any
computation. Unknown keys are rejected at every level.

Matrices are nested arrays whose entries are reals or [re, im] pairs.
"""

import json
from math import pi
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, field_validator, model_validator

from core.atomic import PathLike
from core.errors import ConfigError
from dhym import DhymPhaseSpec
from flows import EIGEN_SOLVERS, FlowConfig, SweepSchedule
from gma import GmaCoefficients
from spectra import HermitianMatrix
from torus import PotentialField, TorusGrid, intersection_numbers, read_potential_csv, read_snapshot

Entry = Union[float, Tuple[float, float]]
MatrixData = List[List[Entry]]

_MATRIX = TypeAdapter(MatrixData)


def to_matrix(data: MatrixData) -> HermitianMatrix:
    """Nested reals or [re, im] pairs -> HermitianMatrix, symmetry checked"""
    rows = [[complex(*x) if isinstance(x, (tuple, list)) else complex(x) for x in row] for row in data]
    return HermitianMatrix.from_array(np.array(rows, dtype=np.complex128))


def parse_matrix(text: str) -> HermitianMatrix:
    """A matrix given as a JSON string on the command line"""
    return to_matrix(_MATRIX.validate_json(text))


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Backgrounds(Section):
    chi: Optional[MatrixData] = None
    alpha: Optional[MatrixData] = None
    omega: Optional[MatrixData] = None


class Profile(Section):
    """amplitude * cos(2 pi sum_a mode_a x_a) over the axes (x1, y1, x2, y2, ...)"""
    amplitude: float = 0.0
    mode: List[int] = Field(default_factory=lambda: [1])

    def field(self, grid: TorusGrid) -> np.ndarray:
        x, y = grid.coordinates()
        axes = [axis for pair in zip(x, y) for axis in pair]
        if len(self.mode) > len(axes):
            raise ConfigError(f"mode has {len(self.mode)} entries but the grid has {len(axes)} real axes")
        phase = sum(2 * pi * m * axis for m, axis in zip(self.mode, axes))
        return self.amplitude * np.cos(np.broadcast_to(phase, grid.shape))


class Coefficients(Section):
    c: List[float] = Field(default_factory=list)
    c0: Optional[float] = None
    c0_profile: Optional[Profile] = None
    c0_floor: float = 0.0
    epsilon: float = 0.0


class Phases(Section):
    theta: float
    Theta: Optional[float] = None
    c0_floor: float = 0.0


class Initial(Section):
    kind: Literal["zero", "cosine", "csv", "snapshot"] = "zero"
    amplitude: float = 0.05
    mode: List[int] = Field(default_factory=lambda: [1])
    path: Optional[str] = None

    @model_validator(mode="after")
    def _needs_path(self):
        if self.kind in ("csv", "snapshot") and not self.path:
            raise ValueError(f"initial kind {self.kind!r} needs a path")
        return self


class Flow(Section):
    perturbed: bool = False
    dt0: float = 0.01
    dt_min: float = 1e-9
    t_max: float = 50.0
    residual_target: float = 1e-5
    sample_every: float = 0.1
    step_tolerance: float = 1e-9
    delta_pos: float = 1e-6
    phase_margin: float = 1e-4
    patience: int = 5
    eigen_solver: str = "jacobi"
    dealias: bool = False
    energy_nodes: int = 16
    initial: Initial = Field(default_factory=Initial)

    @field_validator("eigen_solver")
    @classmethod
    def _known_solver(cls, value: str) -> str:
        if value not in EIGEN_SOLVERS:
            raise ValueError(f"unknown eigen solver {value!r}")
        return value


class Schedule(Section):
    s: List[float]
    t: List[float] = Field(default_factory=list)
    r: List[float] = Field(default_factory=list)
    c0_profile: Optional[Profile] = None
    warm_start: bool = True
    max_workers: int = 4


class Output(Section):
    directory: str = "out"
    prefix: str = "run"
    snapshot: bool = False


class RunConfigFile(Section):
    problem: Literal["gMA", "dHYM"]
    dimension: int = Field(ge=1, le=3)
    grid_N: int = Field(ge=8)
    backgrounds: Backgrounds = Field(default_factory=Backgrounds)
    coefficients: Optional[Coefficients] = None
    phases: Optional[Phases] = None
    flow: Flow = Field(default_factory=Flow)
    schedule: Optional[Schedule] = None
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    output: Output = Field(default_factory=Output)

    @model_validator(mode="after")
    def _equation_data(self):
        if self.problem == "gMA":
            if self.coefficients is None:
                raise ValueError("a gMA problem needs a coefficients section")
            if self.phases is not None:
                raise ValueError("phases belong to dHYM problems")
        else:
            if self.phases is None:
                raise ValueError("a dHYM problem needs a phases section")
            if self.coefficients is not None:
                raise ValueError("coefficients belong to gMA problems")
        return self

    @property
    def grid(self) -> TorusGrid:
        return TorusGrid(self.dimension, self.grid_N)

    def _background(self, name: str, default: float) -> HermitianMatrix:
        data = getattr(self.backgrounds, name)
        matrix = HermitianMatrix.identity(self.dimension, default) if data is None else to_matrix(data)
        if matrix.n != self.dimension:
            raise ConfigError(f"background {name} is {matrix.n}x{matrix.n}, expected dimension {self.dimension}")
        return matrix

    @property
    def omega(self) -> HermitianMatrix:
        return self._background("omega", 1.0)

    @property
    def background(self) -> HermitianMatrix:
        """chi for gMA, alpha for dHYM"""
        return self._background("chi" if self.problem == "gMA" else "alpha", 1.0)

    def gma_coefficients(self, chi: Optional[HermitianMatrix] = None,
                         omega: Optional[HermitianMatrix] = None) -> GmaCoefficients:
        """Coefficients with c0 resolved: the given value, or the forced one plus the zero-mean profile"""
        section = self.coefficients
        chi = chi if chi is not None else self.background
        omega = omega if omega is not None else self.omega
        base = GmaCoefficients(self.dimension, tuple(section.c), None, section.c0_floor)
        if section.c0 is not None:
            c0 = section.c0
        else:
            c0 = intersection_numbers(chi, omega, base, reduce_pencil=True).forced_c0
        if section.c0_profile is not None:
            profile = section.c0_profile.field(self.grid)
            c0 = c0 + (profile - profile.mean())
        return base.with_c0(c0)

    def phase_spec(self) -> DhymPhaseSpec:
        theta = self.phases.theta
        return DhymPhaseSpec(theta, self.phases.Theta if self.phases.Theta is not None else theta,
                             self.phases.c0_floor)

    def initial_potential(self, base_dir: Optional[Path] = None) -> PotentialField:
        grid = self.grid
        initial = self.flow.initial
        if initial.kind == "zero":
            return PotentialField.constant(grid)
        if initial.kind == "cosine":
            return PotentialField(grid, Profile(amplitude=initial.amplitude, mode=initial.mode).field(grid))
        path = Path(initial.path)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if initial.kind == "csv":
            return read_potential_csv(path, grid)
        phi = read_snapshot(path)
        if not isinstance(phi, PotentialField):
            raise ConfigError(f"{path} holds a form field, not a potential")
        grid.check_same(phi.grid)
        return phi

    def flow_config(self, base_dir: Optional[Path] = None) -> FlowConfig:
        flow = self.flow
        common = dict(
            grid=self.grid,
            background=self.background,
            omega=self.omega,
            initial=self.initial_potential(base_dir),
            dt0=flow.dt0,
            dt_min=flow.dt_min,
            t_max=flow.t_max,
            residual_target=flow.residual_target,
            sample_every=flow.sample_every,
            step_tolerance=flow.step_tolerance,
            delta_pos=flow.delta_pos,
            phase_margin=flow.phase_margin,
            patience=flow.patience,
            seed=self.seed,
            eigen_solver=flow.eigen_solver,
            dealias=flow.dealias,
            energy_nodes=flow.energy_nodes,
            label=self.output.prefix,
        )
        if self.problem == "dHYM":
            return FlowConfig(equation="dhym", phase=self.phase_spec(), **common)
        section = self.coefficients
        equation = "perturbed-gma" if flow.perturbed else "gma"
        return FlowConfig(equation=equation, coeffs=self.gma_coefficients(), epsilon=section.epsilon, **common)

    def sweep_schedule(self) -> SweepSchedule:
        if self.schedule is None:
            raise ConfigError("the sweep command needs a schedule section")
        if self.problem != "gMA":
            raise ConfigError("sweeps are defined for gMA problems")
        schedule = self.schedule
        profile = None if schedule.c0_profile is None else schedule.c0_profile.field(self.grid)
        return SweepSchedule(tuple(schedule.s), tuple(schedule.t), tuple(schedule.r), profile,
                             schedule.warm_start, schedule.max_workers)


def load_run_config(path: PathLike) -> RunConfigFile:
    """Read and validate; pydantic ValidationError propagates for schema failures"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return RunConfigFile.model_validate_json(text)
