"""
Sampling campaigns for the dHYM operators and the cones Gamma_{theta,Theta}.

Cone samples are drawn in angle coordinates: a total phase T, a floor
max(0, T - theta) on every angle and a Dirichlet split of the rest, so each
draw satisfies theta~ <= theta and theta(lam) <= Theta without rejection.
"""

from typing import Optional

import numpy as np
import weave

from core.errors import CoefficientError, DomainError
from core.reports import ConeReport
from core.tally import ViolationTally
from spectra import (
    eigenvalues,
    majorizes,
    random_hermitian,
    random_unitary,
    reference_form,
    relative_eigenvalue_field,
    sample_rng,
    with_relative_spectrum,
)
from .operators import dhym_p, dhym_q, gamma_theta_margin
from .phase import DhymPhaseSpec, complex_slope, lagrangian_phase, truncated_phase

PHASE_PROPERTIES = ("monotonicity", "convexity", "sublevel", "ky-fan", "phase-slope", "im-bound")
SLACK = 1e-9
BATCH_SIZE = 2048
KY_FAN_WEIGHTS = (0.25, 0.5, 0.75)
SLOPE_FLOOR = 1e-3
SHIFT_ATTEMPTS = 40


def _draw_angles(rng: np.random.Generator, n: int, theta: float, Theta: float) -> np.ndarray:
    if n == 1:
        return np.array([Theta * (1.0 - rng.random())])
    t_max = min(Theta, n * theta / (n - 1))
    # one draw in eight sits on the outer face theta(lam) = t_max
    total = t_max if rng.random() < 0.125 else t_max * (1.0 - rng.random())
    floor = max(0.0, total - theta)
    return floor + (total - n * floor) * rng.dirichlet(np.ones(n))


def _cot(angles: np.ndarray) -> np.ndarray:
    return np.cos(angles) / np.sin(angles)


def sample_gamma_theta(spec: DhymPhaseSpec, n: int, samples: int, seed: int,
                       theta: Optional[float] = None, Theta: Optional[float] = None) -> np.ndarray:
    """Seeded ascending spectra of the closed cone (theta, Theta taken from the phase window)"""
    theta = spec.theta if theta is None else theta
    Theta = spec.Theta if Theta is None else Theta
    angles = np.array([_draw_angles(sample_rng(seed, index), n, theta, Theta) for index in range(samples)])
    return np.sort(_cot(angles.reshape(samples, n)), axis=-1)


@weave.op()
def im_lower_bound_probe(spec: DhymPhaseSpec, n: int, samples: int, seed: int) -> float:
    """Empirical minimum of Im prod(lam + i) over the closed cone; an estimate, not a bound"""
    lam = sample_gamma_theta(spec, n, samples, seed)
    return float(np.min(complex_slope(lam).im))


def shift_into_q_sublevel(lam: np.ndarray, spec: DhymPhaseSpec, c0: float,
                          attempts: int = SHIFT_ATTEMPTS) -> np.ndarray:
    """Add s >= 0 to every eigenvalue until Q <= -cot theta; adding s keeps lam in the cone"""
    lam = np.atleast_2d(lam)
    shift = np.zeros(lam.shape[0])
    for _ in range(attempts):
        need = np.atleast_1d(dhym_q(lam + shift[:, None], c0) > spec.target_level)
        if not need.any():
            return lam + shift[:, None]
        shift = np.where(need, 2.0 * shift + 0.1, shift)
    need = np.atleast_1d(dhym_q(lam + shift[:, None], c0) > spec.target_level)
    if need.any():
        raise DomainError(f"{int(need.sum())} spectra stay above the Q level after {attempts} shifts")
    return lam + shift[:, None]


class _PhaseCampaign:

    def __init__(self, spec: DhymPhaseSpec, n: int, seed: int, c0: float, tally: ViolationTally):
        self.spec = spec
        self.n = n
        self.seed = seed
        self.c0 = c0
        self.tally = tally
        self.omega = reference_form(n, seed)

    def _matrix(self, lam: np.ndarray, rngs) -> np.ndarray:
        unitaries = np.array([random_unitary(rng, self.n) for rng in rngs])
        return with_relative_spectrum(self.omega, lam, unitaries)

    def _midpoint(self, lam_a: np.ndarray, lam_b: np.ndarray, rngs) -> np.ndarray:
        mid = 0.5 * (self._matrix(lam_a, rngs) + self._matrix(lam_b, rngs))
        return relative_eigenvalue_field(mid, self.omega)

    def monotonicity(self, indices: np.ndarray):
        rngs = [sample_rng(self.seed, i) for i in indices]
        lam_b = np.array([np.sort(_cot(_draw_angles(rng, self.n, self.spec.theta, self.spec.Theta))) for rng in rngs])
        increment = np.array([rng.exponential(rng.uniform(0.2, 3.0), self.n) * (rng.random(self.n) < 0.7)
                              for rng in rngs])
        b = self._matrix(lam_b, rngs)
        a = b + self._matrix(increment, rngs)
        lam_a = relative_eigenvalue_field(a, self.omega)
        context = {"lambda_A": lam_a, "lambda_B": lam_b}
        self.tally.check("theta", lagrangian_phase(lam_a), lagrangian_phase(lam_b), indices, context)
        for ell in range(1, self.n):
            self.tally.check(f"theta~{ell}", truncated_phase(lam_a, ell), truncated_phase(lam_b, ell), indices, context)
            self.tally.check(f"P{ell}", dhym_p(lam_a, ell), dhym_p(lam_b, ell), indices, context)
        self.tally.check("Q", dhym_q(lam_a, self.c0), dhym_q(lam_b, self.c0), indices, context)

    def convexity(self, indices: np.ndarray):
        if self.n == 1:
            raise DomainError("P^ell needs n >= 2")
        rngs = [sample_rng(self.seed, i) for i in indices]
        Theta = self.spec.Theta
        lam_a = np.array([np.sort(_cot(_draw_angles(rng, self.n, Theta, Theta))) for rng in rngs])
        lam_b = np.array([np.sort(_cot(_draw_angles(rng, self.n, Theta, Theta))) for rng in rngs])
        lam_m = self._midpoint(lam_a, lam_b, rngs)
        context = {"lambda_A": lam_a, "lambda_B": lam_b}
        for ell in range(1, self.n):
            average = 0.5 * (dhym_p(lam_a, ell) + dhym_p(lam_b, ell))
            self.tally.check(f"P{ell}", dhym_p(lam_m, ell), average, indices, context)

    def sublevel(self, indices: np.ndarray):
        rngs = [sample_rng(self.seed, i) for i in indices]
        spec = self.spec
        lam_a = np.array([np.sort(_cot(_draw_angles(rng, self.n, spec.theta, spec.Theta))) for rng in rngs])
        lam_b = np.array([np.sort(_cot(_draw_angles(rng, self.n, spec.theta, spec.Theta))) for rng in rngs])
        lam_m = self._midpoint(lam_a, lam_b, rngs)
        context = {"lambda_A": lam_a, "lambda_B": lam_b}
        self.tally.check("cone", -gamma_theta_margin(lam_m, spec), 0.0, indices, context)

        lam_a = shift_into_q_sublevel(lam_a, spec, self.c0)
        lam_b = shift_into_q_sublevel(lam_b, spec, self.c0)
        lam_m = self._midpoint(lam_a, lam_b, rngs)
        context = {"lambda_A": lam_a, "lambda_B": lam_b}
        self.tally.check("Q-sublevel", dhym_q(lam_m, self.c0), spec.target_level, indices, context)
        self.tally.check("Q-sublevel", -gamma_theta_margin(lam_m, spec), 0.0, indices, context)

    def ky_fan(self, indices: np.ndarray):
        rngs = [sample_rng(self.seed, i) for i in indices]
        a = np.array([random_hermitian(rng, self.n, rng.uniform(0.2, 5.0)) for rng in rngs])
        b = np.array([random_hermitian(rng, self.n, rng.uniform(0.2, 5.0)) for rng in rngs])
        t = np.array([KY_FAN_WEIGHTS[int(rng.integers(len(KY_FAN_WEIGHTS)))] for rng in rngs])
        combined = eigenvalues(t[:, None, None] * a + (1 - t)[:, None, None] * b)
        mixed = t[:, None] * eigenvalues(a) + (1 - t)[:, None] * eigenvalues(b)
        ok = np.asarray(majorizes(mixed, combined))
        self.tally.check("ky-fan", (~ok).astype(np.float64), 0.0, indices, {"combined": combined, "mixed": mixed})

    def phase_slope(self, indices: np.ndarray):
        rngs = [sample_rng(self.seed, i) for i in indices]
        lam = np.array([rng.normal(0.0, rng.uniform(0.2, 5.0), self.n) for rng in rngs])
        slope = complex_slope(lam)
        keep = np.abs(slope.im) >= SLOPE_FLOOR * slope.modulus
        lam, indices = lam[keep], indices[keep]
        slope = complex_slope(lam)
        phase = lagrangian_phase(lam)
        defect = np.abs(slope.re - _cot(phase) * slope.im) / slope.modulus
        self.tally.check("cot-identity", defect, 0.0, indices, {"lambda": lam})
        wrapped = np.abs(np.angle(np.exp(1j * (slope.argument - phase))))
        self.tally.check("argument", wrapped, 0.0, indices, {"lambda": lam})

    def im_bound(self, indices: np.ndarray):
        rngs = [sample_rng(self.seed, i) for i in indices]
        lam = np.array([np.sort(_cot(_draw_angles(rng, self.n, self.spec.theta, self.spec.Theta))) for rng in rngs])
        im = complex_slope(lam).im
        self.tally.check("im-bound", (im <= 0).astype(np.float64), 0.0, indices, {"lambda": lam})
        return float(np.min(im)) if im.size else np.inf


@weave.op()
def phase_probe(kind: str, spec: DhymPhaseSpec, n: int, samples: int, seed: int,
                c0: float = 0.0, batch_size: int = BATCH_SIZE) -> ConeReport:
    """Sampled phase properties: monotonicity, P^ell convexity, cone and Q-sublevel
    midpoint closure, Ky-Fan majorization, the phase-slope identity and Im > 0."""
    if kind not in PHASE_PROPERTIES:
        raise DomainError(f"unknown phase property {kind!r}; expected one of {PHASE_PROPERTIES}")
    if c0 < -spec.c0_floor:
        raise CoefficientError(f"c0={c0} below the floor -{spec.c0_floor}")
    tally = ViolationTally(SLACK)
    campaign = _PhaseCampaign(spec, n, seed, c0, tally)
    check = getattr(campaign, kind.replace("-", "_"))
    details = {"kind": kind, "n": n, "seed": seed, "samples": samples, **spec.to_dict(), "c0": c0}
    min_im = np.inf
    for start in range(0, samples, batch_size):
        result = check(np.arange(start, min(samples, start + batch_size)))
        if kind == "im-bound":
            min_im = min(min_im, result)
    if kind == "im-bound":
        details["min_im"] = float(min_im)
    return tally.report(**details)
