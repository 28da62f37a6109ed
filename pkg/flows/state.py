import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from core.atomic import PathLike, atomic_write_text
from core.errors import DomainError
from torus import PotentialField

COLUMNS = ("t", "res_l2", "res_inf", "sup_abs_phidot", "energy_I", "energy_J",
           "min_eig", "theta_min", "theta_max", "dt")
STATUSES = ("converged", "t_max", "diverged")


@dataclass(frozen=True, eq=False)
class FlowState:
    """Stepper state: the potential at time t with its cached spectra and rate"""
    t: float
    phi: PotentialField
    dt: float
    spectra: np.ndarray
    rhs: np.ndarray
    diverged: bool = False
    # attempts rejected on the step that produced this state
    rejected: int = 0
    # RK4 stability cap from the linearized rate
    dt_stable: float = math.inf


@dataclass(frozen=True, eq=False)
class RunRecord:
    """Sampled diagnostics of one flow run and its terminal status"""
    rows: Tuple[Tuple[float, ...], ...]
    status: str
    final: PotentialField
    steps: int = 0
    rejected: int = 0
    wall_time: float = 0.0
    mass_matched: bool = True
    config: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise DomainError(f"unknown run status {self.status!r}")
        times = [row[0] for row in self.rows]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError("run record times must be strictly increasing")
        object.__setattr__(self, "rows", tuple(tuple(float(x) for x in row) for row in self.rows))

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows), columns=list(COLUMNS))

    def column(self, name: str) -> np.ndarray:
        return np.array([row[COLUMNS.index(name)] for row in self.rows])

    @property
    def final_row(self) -> Dict[str, float]:
        return dict(zip(COLUMNS, self.rows[-1])) if self.rows else {}

    def summary(self, alerts: Optional[Sequence[Dict[str, Any]]] = None, timing: bool = False) -> Dict[str, Any]:
        """Run summary; wall time is left out unless ``timing`` so files stay reproducible"""
        final = self.final_row
        out = {
            "status": self.status,
            "final_t": final.get("t"),
            "final_res_l2": final.get("res_l2"),
            "final_res_inf": final.get("res_inf"),
            "samples": len(self.rows),
            "steps": self.steps,
            "rejected_steps": self.rejected,
            "mass_matched": self.mass_matched,
            "seed": self.seed,
            "config": self.config,
        }
        if timing:
            out["wall_time"] = self.wall_time
        if alerts is not None:
            out["alerts"] = list(alerts)
        return _finite(out)

    def write_csv(self, path: PathLike) -> Path:
        return atomic_write_text(path, self.frame().to_csv(index=False, float_format="%.17g"))

    def write_summary(self, path: PathLike, alerts: Optional[Sequence[Dict[str, Any]]] = None) -> Path:
        return atomic_write_text(path, json.dumps(self.summary(alerts), indent=2, sort_keys=True) + "\n")


def _finite(value):
    """JSON has no NaN or infinity; those become null"""
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value
