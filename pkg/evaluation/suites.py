"""
Seeded property suites behind ``main.py props``.

A suite is a named campaign of probes; each probe yields a ConeReport and
the suite passes when none of them recorded a violation. Outcomes depend
only on (seed, samples).
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import pi
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import weave

from core.errors import DomainError
from core.reports import ConeReport
from core.tally import ViolationTally
from dhym import DhymPhaseSpec, gamma_theta_margin, phase_probe
from gma import (
    GmaCoefficients,
    convexity_monotonicity_probe,
    ell_monotone_probe,
    gma_p,
    mass_bound_probe,
    mass_lower_bound,
    tp_equivalence_probe,
)
from spectra import HermitianMatrix, newton_maclaurin_margin, restricted_symmetric, sample_rng, symmetric_polynomials
from torus import (
    MollifierSpec,
    PotentialField,
    TorusGrid,
    chi_from_potential,
    dhym_j_energy,
    dhym_j_gradient,
    gma_j_energy,
    gma_j_gradient,
    integrate,
    ma_energy,
    ma_energy_gradient,
    mollify,
    relative_spectrum_field,
)

logger = logging.getLogger(__name__)

DIMENSIONS = (2, 3, 4, 5)
COEFF_STREAM = 2 ** 40
FIELD_STREAM = 2 ** 41
FD_STEP = 1e-4
FD_RTOL = 1e-4
MOLLIFIER_TOL = 1e-9


@dataclass
class SuiteResult:
    """Aggregated outcome of one suite run"""
    suite: str
    seed: int
    samples: int
    reports: List[ConeReport] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def violations(self) -> int:
        total = 0
        for report in self.reports:
            counts = report.details.get("violations")
            total += sum(counts.values()) if counts else (0 if report.is_member else 1)
        return total

    @property
    def checked(self) -> int:
        return sum(report.checked for report in self.reports)

    @property
    def passed(self) -> bool:
        return all(report.is_member for report in self.reports)

    @property
    def witness(self) -> Optional[Dict[str, Any]]:
        for report in self.reports:
            if not report.is_member:
                return report.to_dict()
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "samples": self.samples,
            "passed": self.passed,
            "violations": self.violations,
            "checked": self.checked,
            "witness": self.witness,
            "reports": [report.to_dict() for report in self.reports],
        }


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    runner: Callable[[int, int], List[ConeReport]]
    default_samples: int


def suite_coefficients(n: int, seed: int) -> GmaCoefficients:
    """Seeded gMA data for dimension n; about one c_k in four is zero"""
    rng = sample_rng(seed, COEFF_STREAM + n)
    c = tuple(float(rng.uniform(0.0, 3.0)) if rng.random() >= 0.25 else 0.0 for _ in range(n - 1))
    return GmaCoefficients(n, c, float(rng.uniform(0.1, 2.0)))


def suite_phase_spec(n: int, seed: int) -> DhymPhaseSpec:
    rng = sample_rng(seed, COEFF_STREAM + 100 + n)
    Theta = float(rng.uniform(0.3, 3.0))
    return DhymPhaseSpec(theta=float(rng.uniform(0.2, Theta)), Theta=Theta)


def _gma_property(prop: str) -> Callable[[int, int], List[ConeReport]]:
    def runner(seed: int, samples: int) -> List[ConeReport]:
        reports = []
        for n in DIMENSIONS:
            coeffs = suite_coefficients(n, seed)
            for op_id in [f"P{ell}" for ell in range(1, n)] + ["Q"]:
                reports.append(convexity_monotonicity_probe(op_id, coeffs, n, samples, seed, properties=(prop,)))
        return reports
    return runner


def _phase_property(kind: str) -> Callable[[int, int], List[ConeReport]]:
    def runner(seed: int, samples: int) -> List[ConeReport]:
        return [phase_probe(kind, suite_phase_spec(n, seed), n, samples, seed) for n in DIMENSIONS]
    return runner


def _tp_equivalence(seed: int, samples: int) -> List[ConeReport]:
    return [tp_equivalence_probe(samples, seed)]


def _ell_monotone(seed: int, samples: int) -> List[ConeReport]:
    return [ell_monotone_probe(suite_coefficients(n, seed), samples, seed) for n in (3, 4, 5)]


def _mass_bound(seed: int, samples: int) -> List[ConeReport]:
    tally = ViolationTally(slack=0.0)
    bound = mass_lower_bound(GmaCoefficients(2, (1.0,)))
    tally.check("n2-c1-value", [abs(bound - 0.125)], [1e-10], [0], {"bound": [bound]})
    reports = [tally.report(bound=bound)]
    for coeffs in (GmaCoefficients(2, (1.0,)), GmaCoefficients(3, (1.0, 1.0)), GmaCoefficients(4, (1.0, 0.0, 2.0))):
        reports.append(mass_bound_probe(coeffs, samples, seed))
    return reports


def _newton_maclaurin(seed: int, samples: int) -> List[ConeReport]:
    tally = ViolationTally(slack=0.0)
    for n in DIMENSIONS:
        lam = np.array([sample_rng(seed, index).exponential(1.0, n) + 1e-3 for index in range(samples)])
        margin = newton_maclaurin_margin(lam).min(axis=-1)
        tally.check(f"n={n}", -margin, 1e-10, np.arange(samples), {"lambda": lam})
    return [tally.report(seed=seed, samples=samples)]


def _rational_spectrum(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.array([Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 10))) for _ in range(n)], dtype=object)


def _symmetric_identities(seed: int, samples: int) -> List[ConeReport]:
    """S_k = S_{k;i} + lambda_i S_{k-1;i} and prod(1 + lambda_j) = sum S_k, in exact arithmetic"""
    tally = ViolationTally(slack=0.0)
    for index in range(samples):
        rng = sample_rng(seed, index)
        n = int(rng.integers(1, 7))
        lam = _rational_spectrum(rng, n)
        s = symmetric_polynomials(lam)
        i = int(rng.integers(0, n))
        bad = sum(s[k] != restricted_symmetric(lam, k, [i]) + lam[i] * restricted_symmetric(lam, k - 1, [i])
                  for k in range(n + 1))
        product = Fraction(1)
        for x in lam:
            product *= 1 + x
        bad += int(product != sum(s))
        tally.check("exact-identity", [float(bad)], [0.0], [index], {"lambda": [[str(x) for x in lam]]})
    return [tally.report(seed=seed, samples=samples)]


def random_potential(grid: TorusGrid, rng: np.random.Generator, amplitude: float, max_mode: int = 1,
                     terms: int = 4) -> PotentialField:
    """A few random low Fourier modes"""
    x, y = grid.coordinates()
    axes = [axis for pair in zip(x, y) for axis in pair]
    values = np.zeros(grid.shape)
    for _ in range(terms):
        modes = rng.integers(-max_mode, max_mode + 1, len(axes))
        phase = 2 * pi * sum(int(m) * axis for m, axis in zip(modes, axes)) + rng.uniform(0, 2 * pi)
        values = values + rng.uniform(-amplitude, amplitude) * np.cos(phase)
    return PotentialField(grid, values)


def _lift(grid: TorusGrid, phi: PotentialField, inside: Callable[[np.ndarray], np.ndarray]) -> HermitianMatrix:
    """Smallest doubling kappa with kappa I + i ddbar phi pointwise inside the cone"""
    identity = HermitianMatrix.identity(grid.n)
    kappa = 1.0
    for _ in range(60):
        background = HermitianMatrix.identity(grid.n, kappa)
        lam = relative_spectrum_field(chi_from_potential(background, phi), identity)
        if np.all(inside(lam) >= 0):
            return background
        kappa *= 2.0
    raise DomainError("could not lift the sample into the cone")


def _mollifier(seed: int, samples: int) -> List[ConeReport]:
    """Mollified pointwise subsolutions stay in the cone"""
    grid = TorusGrid(2, 16)
    identity = HermitianMatrix.identity(2)
    coeffs = GmaCoefficients(2, (1.0,))
    spec = DhymPhaseSpec(theta=1.2, Theta=2.0)

    def gma_margin(lam):
        positive = lam[..., 0]
        safe = np.where(lam > 0, lam, 1.0)
        return np.where(positive > 0, np.minimum(positive, 1.0 - gma_p(safe, coeffs, 1)), positive)

    def phase_margin(lam):
        return gamma_theta_margin(lam, spec)

    tally = ViolationTally(slack=0.0)
    for index in range(samples):
        rng = sample_rng(seed, FIELD_STREAM + index)
        phi = random_potential(grid, rng, 0.01, max_mode=2)
        for cone, margin in (("gma", gma_margin), ("dhym", phase_margin)):
            background = _lift(grid, phi, margin)
            for factor in (2, 4):
                smooth = mollify(phi, MollifierSpec(factor * grid.spacing))
                lam = relative_spectrum_field(chi_from_potential(background, smooth), identity)
                tally.check(f"{cone}-{factor}h", [-float(np.min(margin(lam)))], [MOLLIFIER_TOL], [index],
                            {"kappa": [float(background.entries[0, 0].real)]})
    return [tally.report(seed=seed, samples=samples, N=grid.N)]


def _energy_derivatives(seed: int, samples: int) -> List[ConeReport]:
    """Central differences of I, J and the dHYM J against their gradient densities"""
    grid = TorusGrid(2, 12)
    identity = HermitianMatrix.identity(2)
    chi = HermitianMatrix.identity(2, 2.0)
    coeffs = GmaCoefficients(2, (1.0,), 2.0)
    theta = pi / 2

    functionals = {
        "I": (lambda phi: ma_energy(chi, phi, identity),
              lambda phi: ma_energy_gradient(chi, phi, identity)),
        "J": (lambda phi: gma_j_energy(chi, identity, coeffs, phi),
              lambda phi: gma_j_gradient(chi, identity, coeffs, phi)),
        "J-dhym": (lambda phi: dhym_j_energy(identity, identity, theta, phi),
                   lambda phi: dhym_j_gradient(identity, identity, theta, phi)),
    }
    tally = ViolationTally(slack=0.0)
    for index in range(samples):
        rng = sample_rng(seed, FIELD_STREAM + index)
        phi = random_potential(grid, rng, 0.02)
        psi = random_potential(grid, rng, 0.05) + 1.0
        for name, (energy, gradient) in functionals.items():
            exact = integrate(psi, gradient(phi))
            fd = (energy(phi + psi * FD_STEP) - energy(phi - psi * FD_STEP)) / (2 * FD_STEP)
            tally.check(name, [abs(fd - exact)], [FD_RTOL * max(abs(exact), 1e-6)], [index],
                        {"exact": [exact], "finite_difference": [fd]})
    return [tally.report(seed=seed, samples=samples, N=grid.N)]


def _injected_violation(seed: int, samples: int) -> List[ConeReport]:
    """Negative c_1 breaks monotonicity of P; the suite must fail"""
    coeffs = GmaCoefficients.unchecked(2, (-1.0,), 1.0)
    return [convexity_monotonicity_probe("P1", coeffs, 2, samples, seed, properties=("monotonicity",))]


SUITES: Dict[str, Suite] = {
    suite.name: suite for suite in (
        Suite("gma-monotonicity", "P^ell on the nonnegative cone and Q on the closed cone are decreasing",
              _gma_property("monotonicity"), 10_000),
        Suite("gma-convexity", "midpoint convexity of P^ell and Q", _gma_property("convexity"), 10_000),
        Suite("gma-sublevel", "sublevel sets {P <= 1}, {Q <= 1} are closed under midpoints",
              _gma_property("sublevel"), 10_000),
        Suite("tp-equivalence", "T^p >= 0 iff P^(n-p) <= 1, exact arithmetic", _tp_equivalence, 10_000),
        Suite("ell-monotone", "P^ell <= 1 implies P^(ell+1) <= 1", _ell_monotone, 10_000),
        Suite("mass-bound", "Newton-Maclaurin lower bound on S_n over the closed cone", _mass_bound, 100_000),
        Suite("newton-maclaurin", "normalized symmetric means decrease", _newton_maclaurin, 10_000),
        Suite("symmetric-identities", "recurrence identities of S_k on rational spectra",
              _symmetric_identities, 1_000),
        Suite("dhym-monotonicity", "theta, truncated phases, P and Q decrease", _phase_property("monotonicity"), 10_000),
        Suite("dhym-convexity", "midpoint convexity of P^ell on the Theta cone", _phase_property("convexity"), 10_000),
        Suite("dhym-sublevel", "cone and Q-sublevel midpoint closure", _phase_property("sublevel"), 10_000),
        Suite("ky-fan", "eigenvalues of convex combinations are majorized", _phase_property("ky-fan"), 10_000),
        Suite("phase-slope", "Re prod(lam + i) = cot(theta) Im prod(lam + i)", _phase_property("phase-slope"), 100_000),
        Suite("im-bound", "Im prod(lam + i) > 0 on the closed cone", _phase_property("im-bound"), 10_000),
        Suite("mollifier", "mollified subsolution fields stay in the cone", _mollifier, 100),
        Suite("energy-derivatives", "finite differences of I and both J functionals", _energy_derivatives, 20),
        Suite("injected-violation", "negative c_1 fixture; reports a violation", _injected_violation, 1_000),
    )
}


@weave.op()
def run_suite(suite_id: str, seed: int = 0, samples: Optional[int] = None) -> SuiteResult:
    """Run a registered suite; unknown ids raise DomainError"""
    if suite_id not in SUITES:
        raise DomainError(f"unknown suite {suite_id!r}; known suites: {', '.join(SUITES)}")
    suite = SUITES[suite_id]
    samples = suite.default_samples if samples is None else samples
    if samples < 0:
        raise DomainError("samples must be nonnegative")
    started = time.perf_counter()
    reports = suite.runner(seed, samples)
    result = SuiteResult(suite_id, seed, samples, reports, time.perf_counter() - started)
    logger.info("suite %s: %d violations over %d checks in %.2fs",
                suite_id, result.violations, result.checked, result.elapsed)
    return result
