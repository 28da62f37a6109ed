import pytest

from core.errors import DomainError
from evaluation import SUITES, run_suite

FAST_SUITES = [
    ("gma-monotonicity", 40),
    ("gma-convexity", 40),
    ("gma-sublevel", 40),
    ("tp-equivalence", 100),
    ("ell-monotone", 100),
    ("mass-bound", 300),
    ("newton-maclaurin", 300),
    ("symmetric-identities", 50),
    ("dhym-monotonicity", 60),
    ("dhym-convexity", 60),
    ("dhym-sublevel", 60),
    ("ky-fan", 100),
    ("phase-slope", 500),
    ("im-bound", 200),
]


class TestSuites:

    @pytest.mark.parametrize("suite_id,samples", FAST_SUITES)
    def test_suite_passes(self, suite_id, samples):
        result = run_suite(suite_id, seed=7, samples=samples)
        assert result.passed, result.witness
        assert result.violations == 0 and result.checked > 0
        assert result.witness is None

    def test_registry_is_complete(self):
        assert {suite_id for suite_id, _ in FAST_SUITES} | {"mollifier", "energy-derivatives", "injected-violation"} \
            == set(SUITES)

    def test_mollifier(self):
        assert run_suite("mollifier", seed=1, samples=2).passed

    def test_energy_derivatives(self):
        result = run_suite("energy-derivatives", seed=1, samples=2)
        assert result.passed, result.witness

    def test_injected_violation_is_reported(self):
        result = run_suite("injected-violation", seed=0, samples=200)
        assert not result.passed and result.violations > 0
        assert result.witness is not None and result.witness["witness"]["property"] == "monotonicity"

    def test_deterministic(self):
        first = run_suite("gma-convexity", seed=3, samples=25).to_dict()
        second = run_suite("gma-convexity", seed=3, samples=25).to_dict()
        assert first == second
        assert "elapsed" not in first

    def test_samples_recorded(self):
        result = run_suite("ky-fan", seed=0, samples=10)
        assert result.to_dict()["samples"] == 10 and result.suite == "ky-fan"

    def test_unknown_suite(self):
        with pytest.raises(DomainError):
            run_suite("gma-concavity")

    def test_negative_samples(self):
        with pytest.raises(DomainError):
            run_suite("ky-fan", samples=-1)
