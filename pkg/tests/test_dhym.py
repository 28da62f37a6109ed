import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.errors import CoefficientError, DomainError, PhaseSingularity
from dhym import (
    PHASE_PROPERTIES,
    DhymPhaseSpec,
    arccot,
    complex_slope,
    dhym_p,
    dhym_q,
    gamma_theta_margin,
    gamma_theta_membership,
    im_lower_bound_probe,
    lagrangian_phase,
    phase_probe,
    sample_gamma_theta,
    shift_into_q_sublevel,
    truncated_phase,
)

WINDOW = DhymPhaseSpec(1.2, 2.0)


class TestPhases:

    def test_arccot_range(self):
        assert arccot(0.0) == pytest.approx(np.pi / 2)
        assert 0 < arccot(-1e8) < np.pi and 0 < arccot(1e8) < np.pi
        assert arccot(-1.0) == pytest.approx(3 * np.pi / 4)

    def test_lagrangian_phase(self):
        assert lagrangian_phase(np.array([1.0, 1.0])) == pytest.approx(np.pi / 2)
        assert lagrangian_phase(np.array([0.0, 0.0, 0.0])) == pytest.approx(3 * np.pi / 2)

    def test_truncated_phase_drops_largest(self):
        lam = np.array([3.0, 0.0, 1.0])
        assert truncated_phase(lam, 1) == pytest.approx(np.pi / 2 + np.pi / 4)
        assert truncated_phase(lam, 2) == pytest.approx(np.pi / 2)

    def test_truncated_phase_range(self):
        with pytest.raises(DomainError):
            truncated_phase(np.array([1.0, 2.0]), 2)

    def test_complex_slope(self):
        slope = complex_slope(np.array([1.0, 1.0]))
        assert slope.tolist() == pytest.approx([0.0, 2.0])
        assert slope.modulus == pytest.approx(2.0)

    @seed(51)
    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(-20, 20), min_size=1, max_size=5))
    def test_slope_argument_is_phase(self, values):
        lam = np.array(values)
        slope = complex_slope(lam)
        gap = np.angle(np.exp(1j * (slope.argument - lagrangian_phase(lam))))
        assert abs(gap) <= 1e-9


class TestPhaseSpec:

    @pytest.mark.parametrize("theta,Theta", [(0.0, 1.0), (1.0, 0.5), (1.0, np.pi)])
    def test_window_checked(self, theta, Theta):
        with pytest.raises(CoefficientError):
            DhymPhaseSpec(theta, Theta)

    def test_negative_floor(self):
        with pytest.raises(CoefficientError):
            DhymPhaseSpec(1.0, 1.0, c0_floor=-1.0)

    def test_target_level(self):
        assert DhymPhaseSpec(np.pi / 4, np.pi / 2).target_level == pytest.approx(-1.0)


class TestOperators:

    def test_p_value(self):
        assert dhym_p(np.array([1.0, 1.0]), 1) == pytest.approx(-1.0)

    def test_q_value(self):
        assert dhym_q(np.array([1.0, 1.0]), 1.0) == pytest.approx(0.5)
        assert dhym_q(np.array([1.0, 1.0])) == pytest.approx(0.0, abs=1e-12)

    def test_huge_eigenvalues_are_singular(self):
        with pytest.raises(PhaseSingularity):
            dhym_p(np.array([1e13, 1e13]), 1)

    def test_vanishing_imaginary_part(self):
        # Im (lam_1 + i)(lam_2 + i) = lam_1 + lam_2
        with pytest.raises(PhaseSingularity):
            dhym_q(np.array([-1.0, 1.0]))

    def test_batched(self):
        lam = np.array([[1.0, 1.0], [0.0, 2.0]])
        values = dhym_p(lam, 1)
        assert values.shape == (2,)
        assert values[0] == pytest.approx(-1.0)


class TestCone:

    def test_boundary_point(self):
        spec = DhymPhaseSpec(np.pi / 2, 7 * np.pi / 8)
        lam = np.array([0.0, 1.0])
        assert gamma_theta_membership(lam, spec).is_member
        assert not gamma_theta_membership(lam, spec, closed=False).is_member

    def test_outside(self):
        spec = DhymPhaseSpec(np.pi / 2, 7 * np.pi / 8)
        report = gamma_theta_membership(np.array([0.0, 0.0]), spec)
        assert not report.is_member
        assert report.details["theta_lambda"] == pytest.approx(np.pi)

    def test_one_dimensional(self):
        report = gamma_theta_membership(np.array([1.0]), DhymPhaseSpec(1.0, 1.0))
        assert report.is_member and "theta_tilde" not in report.details

    def test_samples_lie_in_cone(self):
        lam = sample_gamma_theta(WINDOW, 3, 200, seed=1)
        assert lam.shape == (200, 3)
        assert np.all(gamma_theta_margin(lam, WINDOW) >= -1e-9)
        assert np.all(np.diff(lam, axis=-1) >= 0)

    def test_sampling_is_seeded(self):
        first = sample_gamma_theta(WINDOW, 2, 20, seed=8)
        np.testing.assert_array_equal(first, sample_gamma_theta(WINDOW, 2, 20, seed=8))


class TestProbes:

    @pytest.mark.parametrize("kind", PHASE_PROPERTIES)
    def test_properties_hold(self, kind):
        report = phase_probe(kind, WINDOW, 3, samples=150, seed=2)
        assert report.is_member, report.witness
        assert report.details["kind"] == kind

    def test_sublevel_with_c0(self):
        assert phase_probe("sublevel", WINDOW, 2, samples=150, seed=4, c0=0.5).is_member

    def test_c0_below_floor(self):
        with pytest.raises(CoefficientError):
            phase_probe("sublevel", WINDOW, 2, samples=1, seed=0, c0=-1.0)

    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            phase_probe("concavity", WINDOW, 2, samples=1, seed=0)

    def test_im_lower_bound_positive(self):
        assert im_lower_bound_probe(WINDOW, 3, 300, seed=6) > 0

    def test_shift_reaches_q_level(self):
        # Q((0, 1), 0.5) = 1 + 0.5 sits far above -cot(1.2)
        lam = np.array([[0.0, 1.0]])
        shifted = shift_into_q_sublevel(lam, WINDOW, 0.5)
        assert np.all(dhym_q(shifted, 0.5) <= WINDOW.target_level)
        assert np.ptp(shifted - lam) == pytest.approx(0.0)

    def test_shift_gives_up_loudly(self):
        with pytest.raises(DomainError):
            shift_into_q_sublevel(np.array([[0.0, 1.0]]), WINDOW, 0.5, attempts=1)
