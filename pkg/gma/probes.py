"""
Seeded sampling campaigns for the structural properties of the gMA operators.

Every sample draws from the stream (seed, index); batches are evaluated in
one vectorized pass, so results do not depend on the batch size.
"""

from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence

import numpy as np
import weave

from core.errors import DegenerateSpectrum, DomainError
from core.reports import ConeReport
from core.tally import ViolationTally
from spectra import (
    random_unitary,
    reference_form,
    relative_eigenvalue_field,
    sample_rng,
    symmetric_polynomials,
    with_relative_spectrum,
)
from .coefficients import GmaCoefficients
from .operators import gma_p, gma_q, mass_lower_bound, tp_positive

PROBE_PROPERTIES = ("monotonicity", "convexity", "sublevel")
SLACK = 1e-9
BATCH_SIZE = 2048


def _parse_op(op_id: str, n: int) -> Optional[int]:
    """None for Q, otherwise ell"""
    if op_id == "Q":
        return None
    if op_id.startswith("P"):
        ell = int(op_id[1:] or 1)
        if 1 <= ell <= n - 1:
            return ell
    raise DomainError(f"unknown operator {op_id!r} for n={n}; expected Q or P1..P{n - 1}")


def _constant_c0(coeffs: GmaCoefficients) -> float:
    if coeffs.c0 is None:
        return 0.0
    if coeffs.c0_is_field:
        raise DomainError("sampling campaigns need a constant c0")
    return float(coeffs.c0)


def _draw_batch(seed: int, start: int, stop: int, n: int) -> Dict[str, np.ndarray]:
    keys = ("lam_a", "lam_b", "increment", "u", "unitary_a", "unitary_b", "unitary_inc")
    draws = {key: [] for key in keys}
    for index in range(start, stop):
        rng = sample_rng(seed, index)
        scale = rng.uniform(0.2, 3.0)
        draws["lam_a"].append(rng.exponential(scale, n))
        draws["lam_b"].append(rng.exponential(scale, n))
        draws["increment"].append(rng.exponential(scale, n) * (rng.random(n) < 0.7))
        draws["u"].append(rng.uniform(1.0, 2.0, 2))
        draws["unitary_a"].append(random_unitary(rng, n))
        draws["unitary_b"].append(random_unitary(rng, n))
        draws["unitary_inc"].append(random_unitary(rng, n))
    return {key: np.asarray(values) for key, values in draws.items()}


def _scale_into(lam: np.ndarray, u: np.ndarray, bounds: Sequence[Callable[[np.ndarray], np.ndarray]]) -> np.ndarray:
    """Scale each spectrum by max(1, f(lam) for f in bounds) * u.

    Every bound used here is a sum of terms homogeneous of negative degree,
    so f(t lam) <= f(lam) / t for t >= 1 and the scaled spectrum has f <= 1.
    """
    t = np.ones(lam.shape[:-1])
    for bound in bounds:
        t = np.maximum(t, bound(lam))
    return lam * (t * u)[..., None]


class _GmaDomains:
    """Operator under test and the scalings into its domains"""

    def __init__(self, coeffs: GmaCoefficients, ell: Optional[int], c0: float):
        self.coeffs = coeffs
        self.ell = ell
        self.c0 = c0
        n = coeffs.n
        self._p1 = (lambda lam: gma_p(lam, coeffs, 1)) if n > 1 else (lambda lam: np.zeros(lam.shape[:-1]))

    def value(self, lam: np.ndarray) -> np.ndarray:
        if self.ell is None:
            return gma_q(lam, self.coeffs, self.c0)
        return gma_p(lam, self.coeffs, self.ell)

    def q_plus(self, lam: np.ndarray) -> np.ndarray:
        return gma_q(lam, self.coeffs, max(self.c0, 0.0))

    def base(self, lam: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Gamma_{>=0} for P, Gamma-bar for Q"""
        if self.ell is None:
            return _scale_into(lam, u, [self._p1])
        return lam

    def sublevel(self, lam: np.ndarray, u: np.ndarray) -> np.ndarray:
        if self.ell is None:
            return _scale_into(lam, u, [self._p1, self.q_plus])
        return _scale_into(lam, u, [lambda x: gma_p(x, self.coeffs, self.ell)])


@weave.op()
def convexity_monotonicity_probe(op_id: str, coeffs: GmaCoefficients, n: int, samples: int, seed: int,
                                 properties: Sequence[str] = PROBE_PROPERTIES,
                                 batch_size: int = BATCH_SIZE) -> ConeReport:
    """Sampled monotonicity, midpoint convexity and sublevel convexity of P^ell or Q.

    Matrices are built against a fixed random omega and their relative
    spectra recomputed with the Jacobi solver, so the checks exercise the
    matrix-level statements, not just their eigenvalue shadows.
    """
    if coeffs.n != n:
        raise DomainError(f"coefficients are for n={coeffs.n}, probe asked for n={n}")
    unknown = set(properties) - set(PROBE_PROPERTIES)
    if unknown:
        raise DomainError(f"unknown properties {sorted(unknown)}")
    ell = _parse_op(op_id, n)
    domains = _GmaDomains(coeffs, ell, _constant_c0(coeffs) if ell is None else 0.0)
    omega = reference_form(n, seed)
    tally = ViolationTally(SLACK)

    for start in range(0, samples, batch_size):
        stop = min(samples, start + batch_size)
        draws = _draw_batch(seed, start, stop, n)
        indices = np.arange(start, stop)
        u_a, u_b = draws["u"][:, 0], draws["u"][:, 1]

        if "monotonicity" in properties:
            lam_b = domains.base(draws["lam_b"], u_b)
            b = with_relative_spectrum(omega, lam_b, draws["unitary_b"])
            a = b + with_relative_spectrum(omega, draws["increment"], draws["unitary_inc"])
            lam_a = relative_eigenvalue_field(a, omega)
            tally.check("monotonicity", domains.value(lam_a), domains.value(lam_b), indices,
                        {"lambda_A": lam_a, "lambda_B": lam_b})

        if "convexity" in properties:
            lam_a = domains.base(draws["lam_a"], u_a)
            lam_b = domains.base(draws["lam_b"], u_b)
            mid = 0.5 * (with_relative_spectrum(omega, lam_a, draws["unitary_a"])
                         + with_relative_spectrum(omega, lam_b, draws["unitary_b"]))
            lam_m = relative_eigenvalue_field(mid, omega)
            average = 0.5 * (domains.value(lam_a) + domains.value(lam_b))
            tally.check("convexity", domains.value(lam_m), average, indices,
                        {"lambda_A": lam_a, "lambda_B": lam_b})

        if "sublevel" in properties:
            lam_a = domains.sublevel(draws["lam_a"], u_a)
            lam_b = domains.sublevel(draws["lam_b"], u_b)
            mid = 0.5 * (with_relative_spectrum(omega, lam_a, draws["unitary_a"])
                         + with_relative_spectrum(omega, lam_b, draws["unitary_b"]))
            lam_m = relative_eigenvalue_field(mid, omega)
            context = {"lambda_A": lam_a, "lambda_B": lam_b}
            tally.check("sublevel", domains.value(lam_m), 1.0, indices, context)
            if ell is None and n > 1:
                tally.check("sublevel", gma_p(lam_m, coeffs, 1), 1.0, indices, context)

    return tally.report(op=op_id, n=n, seed=seed, samples=samples)


def sample_gamma_bar(coeffs: GmaCoefficients, samples: int, seed: int) -> np.ndarray:
    """Seeded spectra of {lam >= 0, P(lam) <= 1}; unit scalings put some of them on P = 1"""
    n = coeffs.n
    raw = np.empty((samples, n))
    u = np.empty(samples)
    for index in range(samples):
        rng = sample_rng(seed, index)
        raw[index] = rng.exponential(rng.uniform(0.2, 3.0), n)
        u[index] = 1.0 if rng.random() < 0.125 else rng.uniform(1.0, 2.0)
    if n == 1:
        return raw
    return _scale_into(raw, u, [lambda lam: gma_p(lam, coeffs, 1)])


@weave.op()
def mass_bound_probe(coeffs: GmaCoefficients, samples: int, seed: int) -> ConeReport:
    """Certify mass_lower_bound against sampled constrained spectra"""
    bound = mass_lower_bound(coeffs)
    lam = sample_gamma_bar(coeffs, samples, seed)
    sn = symmetric_polynomials(lam)[..., -1]
    tally = ViolationTally(SLACK)
    tally.check("mass-bound", np.full(samples, bound), sn, np.arange(samples), {"lambda": lam})
    return tally.report(bound=bound, sampled_min=float(sn.min()) if samples else None)


@weave.op()
def ell_monotone_probe(coeffs: GmaCoefficients, samples: int, seed: int) -> ConeReport:
    """P^ell <= 1 forces P^(ell+1) <= 1 on the nonnegative cone"""
    n = coeffs.n
    tally = ViolationTally(SLACK)
    indices = np.arange(samples)
    for ell in range(1, n - 1):
        raw = np.empty((samples, n))
        u = np.empty(samples)
        for index in range(samples):
            rng = sample_rng(seed, index * n + ell)
            raw[index] = rng.exponential(rng.uniform(0.2, 3.0), n)
            u[index] = rng.uniform(1.0, 2.0)
        lam = _scale_into(raw, u, [lambda x, ell=ell: gma_p(x, coeffs, ell)])
        tally.check(f"P{ell}->P{ell + 1}", gma_p(lam, coeffs, ell + 1), 1.0, indices, {"lambda": lam})
    return tally.report(n=n, seed=seed, samples=samples)


def _rational_sample(rng: np.random.Generator, n: int):
    values = [Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 12))) for _ in range(n)]
    if rng.random() < 0.3:
        values[int(rng.integers(0, n))] = Fraction(0)
    c = tuple(Fraction(int(rng.integers(0, 6)), int(rng.integers(1, 4))) for _ in range(n - 1))
    return np.array(sorted(values), dtype=object), GmaCoefficients(n, c)


@weave.op()
def tp_equivalence_probe(samples: int, seed: int, max_n: int = 5) -> ConeReport:
    """T^p >= 0 iff P^(n-p) <= 1 on rational spectra, decided in exact arithmetic.

    At most one eigenvalue vanishes, so some denominator of every P^ell is positive.
    """
    tally = ViolationTally(slack=0.0)
    for index in range(samples):
        rng = sample_rng(seed, index)
        n = int(rng.integers(2, max_n + 1))
        lam, coeffs = _rational_sample(rng, n)
        for p in range(1, n):
            try:
                p_ok = gma_p(lam, coeffs, n - p) <= 1
            except DegenerateSpectrum:
                p_ok = coeffs.is_ma
            t_ok = bool(tp_positive(lam, coeffs, p))
            tally.check("tp-equivalence", [float(t_ok != bool(p_ok))], [0.0], [index],
                        {"lambda": [[str(x) for x in lam]], "p": [p],
                         "c": [[str(ck) for ck in coeffs.c]]})
    return tally.report(seed=seed, samples=samples, max_n=max_n)
