"""
Classical RK4 with step-doubling error control and admissibility guards.

A step of size dt is compared against two steps of size dt/2; the pair is
accepted when max|full - halves| <= tol (1 + max|phi|). Any stage leaving the
admissible set halves dt and retries; below dt_min the run is diverged.

The flows are parabolic, so the linearized rate is stiff: its spectral
radius grows like N^2. Steps are also capped by the RK4 stability interval
on the negative real axis, scaled by a power-iteration estimate of that
radius. Inside the cap the amplification factor lies in (0, 1) for every
mode, and the residual decays instead of sitting at the error tolerance.
"""

import logging
import math
from dataclasses import replace
from typing import Optional, Tuple

import numpy as np

from torus import PotentialField
from .config import FlowConfig
from .rhs import FlowEquation, GuardTripped
from .state import FlowState

logger = logging.getLogger(__name__)

SAFETY = 0.9
MAX_GROWTH = 2.0
MIN_SHRINK = 0.2

# |1 + z + z^2/2 + z^3/6 + z^4/24| <= 1 on [-2.785, 0]
RK4_REAL_STABILITY = 2.785
STABILITY_SAFETY = 0.5
POWER_ITERATIONS = 25
DIFFERENCE_STEP = 1e-7


def _rk4(equation: FlowEquation, values: np.ndarray, dt: float, k1: np.ndarray) -> np.ndarray:
    _, k2 = equation.evaluate(values + 0.5 * dt * k1)
    _, k3 = equation.evaluate(values + 0.5 * dt * k2)
    _, k4 = equation.evaluate(values + dt * k3)
    return values + dt * (k1 + 2.0 * (k2 + k3) + k4) / 6.0


def _attempt(equation: FlowEquation, state: FlowState, dt: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    values = state.phi.values
    full = _rk4(equation, values, dt, state.rhs)
    half = _rk4(equation, values, 0.5 * dt, state.rhs)
    _, k_half = equation.evaluate(half)
    halves = _rk4(equation, half, 0.5 * dt, k_half)
    lam, rate = equation.evaluate(halves)
    error = float(np.max(np.abs(full - halves)))
    return halves, lam, rate, error


def spectral_radius(equation: FlowEquation, values: np.ndarray, rate: np.ndarray) -> float:
    """Power-iteration estimate of the largest |eigenvalue| of d(rate)/d(phi) at ``values``.

    Jacobian products are forward differences; the start vector is seeded so
    repeated runs give identical step sequences.
    """
    v = np.random.default_rng(0).standard_normal(values.shape)
    v /= np.linalg.norm(v)
    h = DIFFERENCE_STEP * (1.0 + float(np.max(np.abs(values))))
    radius = 0.0
    for _ in range(POWER_ITERATIONS):
        try:
            _, moved = equation.evaluate(values + h * v)
        except GuardTripped as exc:
            logger.debug("stiffness estimate stopped early: %s", exc)
            break
        w = (moved - rate) / h
        radius = float(np.linalg.norm(w))
        if radius == 0.0:
            break
        v = w / radius
    return radius


def stable_dt(equation: FlowEquation, values: np.ndarray, rate: np.ndarray) -> float:
    radius = spectral_radius(equation, values, rate)
    return math.inf if radius == 0.0 else STABILITY_SAFETY * RK4_REAL_STABILITY / radius


def refresh_stability(equation: FlowEquation, state: FlowState) -> FlowState:
    """Recompute the stability cap at the current potential"""
    return replace(state, dt_stable=stable_dt(equation, state.phi.values, state.rhs))


def initial_state(equation: FlowEquation, config: FlowConfig) -> FlowState:
    lam, rate = equation.evaluate(config.initial.values)
    state = FlowState(0.0, config.initial, config.dt0, lam, rate)
    return refresh_stability(equation, state)


def step(state: FlowState, config: FlowConfig, equation: Optional[FlowEquation] = None,
         max_dt: Optional[float] = None) -> FlowState:
    """Advance by one accepted step no longer than ``max_dt``.

    The returned state carries the number of rejected attempts. A diverged
    state keeps t and phi and carries the dt that fell below dt_min.
    """
    equation = equation if equation is not None else FlowEquation(config)
    # the cap never forces dt under dt_min; a floor that high is the caller's choice
    cap = max(state.dt_stable, config.dt_min)
    dt = min(state.dt, cap)
    rejected = 0
    while True:
        if dt < config.dt_min:
            logger.warning("step size %.3e fell below dt_min at t=%.6g", dt, state.t)
            return replace(state, dt=dt, diverged=True, rejected=rejected)
        trial = dt if max_dt is None else min(dt, max_dt)
        try:
            values, lam, rate, error = _attempt(equation, state, trial)
        except GuardTripped as exc:
            logger.debug("guard tripped at t=%.6g dt=%.3e: %s", state.t, trial, exc)
            rejected += 1
            dt = 0.5 * trial
            continue
        scale = config.step_tolerance * (1.0 + float(np.max(np.abs(values))))
        if error > scale:
            rejected += 1
            dt = trial * max(MIN_SHRINK, SAFETY * (scale / error) ** 0.2)
            continue
        growth = MAX_GROWTH if error == 0 else min(MAX_GROWTH, SAFETY * (scale / error) ** 0.2)
        # a step clipped to a sample time does not shrink the proposal
        proposal = trial * growth
        if trial < dt:
            proposal = max(proposal, dt)
        next_dt = min(config.dt0, cap, proposal)
        phi = PotentialField(state.phi.grid, values)
        return FlowState(state.t + trial, phi, next_dt, lam, rate,
                         rejected=rejected, dt_stable=state.dt_stable)
