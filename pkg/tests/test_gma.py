from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.errors import CoefficientError, DegenerateSpectrum, DomainError
from gma import (
    GmaCoefficients,
    c_subsolution_margin,
    convexity_monotonicity_probe,
    ell_monotone_probe,
    gamma_bar_membership,
    gma_p,
    gma_q,
    mass_bound_probe,
    mass_lower_bound,
    p_subsets,
    sample_gamma_bar,
    tp_equivalence_probe,
    tp_positive,
    tp_subset_coefficients,
)
from spectra import symmetric_polynomials
from tests.oracles import gma_p_by_enumeration, tp_coefficients_by_enumeration
from tests.strategies import positive_rational_spectra


class TestCoefficients:

    def test_negative_ck_rejected(self):
        with pytest.raises(CoefficientError):
            GmaCoefficients(2, (-1.0,))

    def test_length_checked(self):
        with pytest.raises(CoefficientError):
            GmaCoefficients(3, (1.0,))

    def test_monge_ampere_needs_positive_c0(self):
        with pytest.raises(CoefficientError):
            GmaCoefficients(2, (0.0,), 0.0)
        assert GmaCoefficients(2, (0.0,), 1.0).regime == "MA"

    def test_mixed_regime_mean(self):
        with pytest.raises(CoefficientError):
            GmaCoefficients(2, (1.0,), -0.5, c0_floor=1.0)
        field = np.array([-0.5, 0.5, 1.0])
        coeffs = GmaCoefficients(2, (1.0,), field, c0_floor=1.0)
        assert coeffs.c0_is_field and coeffs.c0_min() == -0.5

    def test_floor(self):
        with pytest.raises(CoefficientError):
            GmaCoefficients(2, (1.0,), -0.5)

    def test_weights_and_shift(self):
        coeffs = GmaCoefficients(3, (3.0, 6.0), 1.0)
        assert coeffs.weights() == (1.0, 2.0)
        assert coeffs.weights(exact=True) == (Fraction(1), Fraction(2))
        shifted = coeffs.shifted(0.5)
        assert shifted.c == (3.5, 6.5) and shifted.c0 is None

    def test_unchecked_skips_validation(self):
        coeffs = GmaCoefficients.unchecked(2, (-1.0,), 1.0)
        assert coeffs.c == (-1.0,)


class TestOperators:

    def test_desk_values(self, desk_coeffs):
        lam = np.array([2.0, 2.0])
        assert gma_q(lam, desk_coeffs) == pytest.approx(1.0)
        assert gma_p(lam, desk_coeffs, 1) == pytest.approx(0.25)
        assert c_subsolution_margin(lam, desk_coeffs) == pytest.approx(0.75)

    def test_exact_arithmetic(self, exact):
        coeffs = GmaCoefficients(2, (1,), 2)
        lam = exact(2, 2)
        assert gma_q(lam, coeffs) == Fraction(1)
        assert gma_p(lam, coeffs, 1) == Fraction(1, 4)

    def test_single_exact_spectrum(self):
        coeffs = GmaCoefficients(2, (1,))
        lam = np.array([Fraction(2), Fraction(3)], dtype=object)
        assert gma_p(lam, coeffs, 1) == Fraction(1, 4)
        assert gma_q(lam, coeffs, 1) == Fraction(7, 12)
        assert tp_positive(lam, coeffs, 1)

    def test_monge_ampere_p_vanishes(self):
        coeffs = GmaCoefficients(3, (0.0, 0.0), 1.0)
        assert gma_p(np.array([1.0, 2.0, 3.0]), coeffs, 1) == 0.0

    def test_p_needs_nonnegative(self, desk_coeffs):
        with pytest.raises(DomainError):
            gma_p(np.array([-1.0, 2.0]), desk_coeffs, 1)

    def test_p_ell_range(self, desk_coeffs):
        with pytest.raises(DomainError):
            gma_p(np.array([1.0, 2.0]), desk_coeffs, 2)

    def test_degenerate_p(self):
        coeffs = GmaCoefficients(3, (1.0, 1.0))
        with pytest.raises(DegenerateSpectrum):
            gma_p(np.array([0.0, 0.0, 0.0]), coeffs, 1)

    def test_zero_eigenvalue_makes_p_infinite(self, desk_coeffs):
        assert gma_p(np.array([0.0, 2.0]), desk_coeffs, 1) == np.inf

    def test_q_needs_positive_determinant(self, desk_coeffs):
        with pytest.raises(DegenerateSpectrum):
            gma_q(np.array([0.0, 2.0]), desk_coeffs)

    @seed(31)
    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 5).flatmap(lambda n: st.tuples(
        positive_rational_spectra(n),
        st.lists(st.fractions(min_value=0, max_value=4, max_denominator=4), min_size=n - 1, max_size=n - 1),
        st.integers(1, n - 1),
    )))
    def test_p_matches_enumeration(self, case):
        values, c, ell = case
        coeffs = GmaCoefficients(len(values), tuple(c))
        if coeffs.is_ma:
            return
        lam = np.array(sorted(values), dtype=object)
        assert gma_p(lam, coeffs, ell) == gma_p_by_enumeration(sorted(values), c, ell)

    def test_p_scales_termwise(self):
        coeffs = GmaCoefficients(3, (1.0, 2.0))
        lam = np.array([0.5, 1.0, 3.0])
        for t in (1.0, 2.0, 5.0):
            assert gma_p(t * lam, coeffs, 1) <= gma_p(lam, coeffs, 1) / t + 1e-12

    def test_batched_matches_single(self):
        coeffs = GmaCoefficients(3, (1.0, 2.0), 0.5)
        lam = np.array([[0.5, 1.0, 3.0], [1.0, 1.0, 1.0]])
        batched = gma_q(lam, coeffs)
        assert batched[1] == pytest.approx(gma_q(lam[1], coeffs))


class TestCones:

    def test_membership(self, desk_coeffs):
        report = gamma_bar_membership(np.array([2.0, 2.0]), desk_coeffs)
        assert report.is_member and report.margin == pytest.approx(0.75)

    def test_negative_eigenvalue(self, desk_coeffs):
        report = gamma_bar_membership(np.array([-1.0, 2.0]), desk_coeffs)
        assert not report.is_member
        assert report.details["violation"] == "negative eigenvalue"
        assert report.witness == {"index": 0, "eigenvalue": -1.0}

    def test_p_exceeds_one(self, desk_coeffs):
        report = gamma_bar_membership(np.array([0.25, 5.0]), desk_coeffs)
        # dropping lam_2 leaves c_1 / (2 lam_1) = 2
        assert not report.is_member
        assert report.witness == {"excluded": [1], "ratio": pytest.approx(2.0)}

    def test_boundary_is_closed(self, desk_coeffs):
        assert gamma_bar_membership(np.array([0.5, 3.0]), desk_coeffs).is_member

    def test_subsets(self):
        assert p_subsets(3, 2) == [(0, 1), (0, 2), (1, 2)]

    @seed(41)
    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 4).flatmap(lambda n: st.tuples(
        positive_rational_spectra(n),
        st.lists(st.fractions(min_value=0, max_value=4, max_denominator=4), min_size=n - 1, max_size=n - 1),
        st.integers(1, n),
    )))
    def test_tp_matches_enumeration(self, case):
        values, c, p = case
        n = len(values)
        coeffs = GmaCoefficients(n, tuple(c), Fraction(1, 2))
        lam = np.array(sorted(values), dtype=object)
        expected = tp_coefficients_by_enumeration(sorted(values), c, p, Fraction(1, 2))
        assert list(tp_subset_coefficients(lam, coeffs, p)) == expected

    def test_tp_equivalence_examples(self, exact):
        coeffs = GmaCoefficients(2, (1,))
        # P^1 = 1/(2 min lam): inside for lam_min >= 1/2
        assert tp_positive(exact(1, 3), coeffs, 1)
        assert tp_positive(exact(Fraction(1, 2), 3), coeffs, 1)
        assert not tp_positive(exact(Fraction(1, 3), 3), coeffs, 1)

    def test_tp_p_range(self, desk_coeffs):
        with pytest.raises(DomainError):
            tp_subset_coefficients(np.array([1.0, 2.0]), desk_coeffs, 3)


class TestMassBound:

    def test_n2_value(self):
        assert abs(mass_lower_bound(GmaCoefficients(2, (1.0,))) - 0.125) <= 1e-10

    def test_monge_ampere_uses_c0(self):
        assert mass_lower_bound(GmaCoefficients(2, (0.0,), 3.0)) == 3.0

    def test_sampled_certificate(self):
        coeffs = GmaCoefficients(3, (1.0, 2.0))
        lam = sample_gamma_bar(coeffs, 500, seed=4)
        assert np.all(gma_p(lam, coeffs, 1) <= 1 + 1e-9)
        assert symmetric_polynomials(lam)[..., -1].min() >= mass_lower_bound(coeffs) - 1e-12
        assert mass_bound_probe(coeffs, 500, seed=4).is_member


class TestProbes:

    @pytest.mark.parametrize("op_id", ["P1", "P2", "Q"])
    def test_structural_properties_hold(self, op_id):
        coeffs = GmaCoefficients(3, (1.0, 0.5), 0.7)
        report = convexity_monotonicity_probe(op_id, coeffs, 3, samples=300, seed=7)
        assert report.is_member, report.witness
        assert report.checked == 300 * 3 + (300 if op_id == "Q" else 0)

    def test_deterministic(self):
        coeffs = GmaCoefficients(2, (1.0,), 0.5)
        first = convexity_monotonicity_probe("Q", coeffs, 2, samples=200, seed=3)
        second = convexity_monotonicity_probe("Q", coeffs, 2, samples=200, seed=3, batch_size=17)
        assert first.is_member == second.is_member and first.checked == second.checked
        assert first.margin == pytest.approx(second.margin, rel=1e-12)

    def test_negative_coefficient_is_caught(self):
        coeffs = GmaCoefficients.unchecked(2, (-1.0,), 1.0)
        report = convexity_monotonicity_probe("P1", coeffs, 2, samples=200, seed=0, properties=("monotonicity",))
        assert not report.is_member
        assert report.witness["property"] == "monotonicity"
        assert "lambda_A" in report.witness

    def test_unknown_operator(self, desk_coeffs):
        with pytest.raises(DomainError):
            convexity_monotonicity_probe("P5", desk_coeffs, 2, samples=1, seed=0)

    def test_dimension_mismatch(self, desk_coeffs):
        with pytest.raises(DomainError):
            convexity_monotonicity_probe("Q", desk_coeffs, 3, samples=1, seed=0)

    def test_ell_monotone(self):
        assert ell_monotone_probe(GmaCoefficients(4, (1.0, 0.0, 2.0)), 300, seed=2).is_member

    def test_tp_equivalence(self):
        report = tp_equivalence_probe(300, seed=5)
        assert report.is_member and report.checked > 0
