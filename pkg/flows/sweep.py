"""
Boundary sweeps: a decreasing family of problems approaching a degenerate
one, each solved by the flow and compared through sup-normalized limits.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional

import numpy as np
import weave

from core.errors import ConfigError, DomainError, ScheduleError
from gma import GmaCoefficients
from torus import IntersectionReport, PotentialField, intersection_numbers, l1_distance, normalize_sup
from .config import FlowConfig, SweepSchedule
from .run import run
from .state import RunRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SweepIndex:
    index: int
    config: FlowConfig
    intersection: IntersectionReport


@dataclass(frozen=True, eq=False)
class SweepReport:
    indices: List[SweepIndex]
    records: List[RunRecord]
    limits: List[PotentialField]
    distances: List[float]

    @property
    def forced_c0(self) -> List[float]:
        return [item.intersection.forced_c0 for item in self.indices]

    @property
    def distances_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.distances, self.distances[1:]))

    @property
    def statuses(self) -> List[str]:
        return [record.status for record in self.records]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "indices": [item.index for item in self.indices],
            "forced_c0": self.forced_c0,
            "min_margins": [item.intersection.min_margin for item in self.indices],
            "statuses": self.statuses,
            "final_res_l2": [record.final_row.get("res_l2") for record in self.records],
            "min_eig": [float(np.min(record.column("min_eig"))) for record in self.records],
            "distances": self.distances,
            "distances_decreasing": self.distances_decreasing,
        }


def _index_config(base: FlowConfig, schedule: SweepSchedule, i: int) -> SweepIndex:
    """Problem data of 1-based index i; raises ScheduleError when a margin is not strictly positive"""
    s, t, r = schedule.s[i - 1], schedule.t[i - 1], schedule.r[i - 1]
    chi = base.background + base.omega * s
    omega = base.omega * (1.0 + r)
    coeffs = base.coeffs.shifted(t)
    report = intersection_numbers(chi, omega, coeffs, reduce_pencil=True)
    failure = report.first_failure
    if failure is not None:
        raise ScheduleError(i, failure.p, failure.subset, failure.value)
    c0 = report.forced_c0
    if schedule.c0_profile is not None:
        profile = np.asarray(schedule.c0_profile, dtype=np.float64)
        c0 = c0 + (profile - profile.mean())
    coeffs = GmaCoefficients(coeffs.n, coeffs.c, c0, coeffs.c0_floor)
    config = replace(base, background=chi, omega=omega, coeffs=coeffs, label=f"sweep-{i}")
    return SweepIndex(i, config, report)


def _warm(config: FlowConfig, previous: Optional[PotentialField]) -> FlowConfig:
    if previous is None:
        return config
    try:
        return config.with_initial(previous)
    except ConfigError as exc:
        # the previous limit need not be admissible for the smaller class
        logger.info("warm start rejected for %s: %s", config.label, exc)
        return config


@weave.op()
def boundary_sweep(base_config: FlowConfig, schedule: SweepSchedule) -> SweepReport:
    """Solve every index of the schedule and report L1 distances of successive limits.

    Feasibility of every index is checked before any flow runs.
    """
    if base_config.equation == "dhym":
        raise DomainError("boundary sweeps are defined for the gMA flows")
    indices = [_index_config(base_config, schedule, i) for i in range(1, len(schedule) + 1)]
    for item in indices:
        logger.info("index %d: forced c0 %.6g, min margin %.6g",
                    item.index, item.intersection.forced_c0, item.intersection.min_margin)

    if schedule.warm_start:
        records = []
        previous = None
        for item in indices:
            record = run(_warm(item.config, previous))
            records.append(record)
            previous = record.final if record.status == "converged" else None
    else:
        with ThreadPoolExecutor(max_workers=schedule.max_workers) as pool:
            records = list(pool.map(lambda item: run(item.config), indices))

    limits = [normalize_sup(record.final) for record in records]
    distances = [l1_distance(b, a) for a, b in zip(limits, limits[1:])]
    return SweepReport(indices, records, limits, distances)
