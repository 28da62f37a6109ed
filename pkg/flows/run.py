"""
Flow runs: step until the residual settles, t_max passes or the stepper gives up.

Rows are sampled at the uniform times k * sample_every; the stepper clips
its step to land on each of them.
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import weave

from core.errors import ConfigError, DomainError
from torus import PotentialField, intersection_numbers, linf_distance, normalize_sup
from .config import FlowConfig
from .integrator import initial_state, refresh_stability, step
from .rhs import FlowEquation, GuardTripped
from .state import COLUMNS, FlowState, RunRecord

logger = logging.getLogger(__name__)

LANDING_TOL = 1e-12
MASS_TOL = 1e-9


def mass_matched(config: FlowConfig) -> bool:
    """Whether c0 integrates to the value forced by the topological constraint"""
    if not config.is_gma:
        return True
    try:
        forced = intersection_numbers(config.background, config.omega, config.coeffs, reduce_pencil=True).forced_c0
    except DomainError as exc:
        logger.warning("forced c0 unavailable: %s", exc)
        return False
    return abs(config.coeffs.c0_mean() - forced) <= MASS_TOL * max(1.0, abs(forced))


def sample_row(equation: FlowEquation, state: FlowState) -> tuple:
    rate = state.rhs
    theta_min, theta_max = equation.phase_extrema(state.spectra)
    sup_rate = float(np.max(np.abs(rate)))
    values = {
        "t": state.t,
        "res_l2": float(np.sqrt(np.mean(rate ** 2))),
        "res_inf": sup_rate,
        "sup_abs_phidot": sup_rate,
        "energy_I": equation.energy_i(state.phi),
        "energy_J": equation.energy_j(state.phi),
        "min_eig": float(state.spectra[..., 0].min()),
        "theta_min": theta_min,
        "theta_max": theta_max,
        "dt": state.dt,
    }
    return tuple(values[name] for name in COLUMNS)


@weave.op()
def run(config: FlowConfig, dashboard: Optional[Any] = None) -> RunRecord:
    """Integrate the configured flow and record its diagnostics.

    Converged means res_l2 <= residual_target on ``patience`` consecutive
    samples, or an exactly stationary initial state.
    """
    started = time.perf_counter()
    equation = FlowEquation(config)
    matched = mass_matched(config)
    if not matched:
        logger.warning("c0 does not match the forced value; I-conservation is not expected")
    try:
        state = initial_state(equation, config)
    except GuardTripped as exc:
        raise ConfigError(f"initial potential is not admissible: {exc}") from exc

    rows = [sample_row(equation, state)]
    if dashboard is not None:
        dashboard.record(dict(zip(COLUMNS, rows[0])))
    streak = 1 if rows[0][1] <= config.residual_target else 0
    stationary = rows[0][2] == 0.0
    steps = rejected = 0
    sample_index = 1
    status = "converged" if stationary else None

    while status is None:
        if streak >= config.patience:
            status = "converged"
            break
        if state.t >= config.t_max * (1 - LANDING_TOL):
            status = "t_max"
            break
        target = min(sample_index * config.sample_every, config.t_max)
        state = step(state, config, equation, max_dt=target - state.t)
        rejected += state.rejected
        if state.diverged:
            status = "diverged"
            break
        steps += 1
        if state.t >= target - LANDING_TOL * max(1.0, target):
            state = refresh_stability(equation, replace(state, t=target))
            row = sample_row(equation, state)
            rows.append(row)
            sample_index += 1
            streak = streak + 1 if row[1] <= config.residual_target else 0
            if dashboard is not None:
                dashboard.record(dict(zip(COLUMNS, row)))

    record = RunRecord(
        rows=tuple(rows),
        status=status,
        final=state.phi,
        steps=steps,
        rejected=rejected,
        wall_time=time.perf_counter() - started,
        mass_matched=matched,
        config=config.to_dict(),
        seed=config.seed,
    )
    logger.info("flow %s: %s after %d steps, res_l2=%.3e", config.equation, status, steps, rows[-1][1])
    return record


@dataclass(frozen=True, eq=False)
class UniquenessReport:
    gap: float
    records: List[RunRecord]
    limits: List[PotentialField]

    @property
    def statuses(self) -> List[str]:
        return [r.status for r in self.records]

    def to_dict(self) -> Dict[str, Any]:
        return {"linf_gap": self.gap, "statuses": self.statuses, "runs": len(self.records)}


@weave.op()
def uniqueness_probe(config: FlowConfig, initial_potentials: Sequence[PotentialField]) -> UniquenessReport:
    """Run from several initial data; report the largest L-infinity gap of the sup-normalized limits"""
    if len(initial_potentials) < 2:
        raise DomainError("the uniqueness probe needs at least two initial potentials")
    records = [run(config.with_initial(phi0)) for phi0 in initial_potentials]
    limits = [normalize_sup(record.final) for record in records]
    gap = max(linf_distance(a, b) for i, a in enumerate(limits) for b in limits[i + 1:])
    return UniquenessReport(gap, records, limits)
