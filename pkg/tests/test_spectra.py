from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from core.errors import DomainError, PencilError
from spectra import (
    HermitianMatrix,
    Spectrum,
    eigenvalues,
    elementary_symmetric,
    jacobi_eigenvalues,
    majorizes,
    newton_maclaurin_margin,
    random_hermitian,
    relative_eigenvalue_field,
    relative_eigenvalues,
    restricted_symmetric,
    sample_rng,
    symmetric_polynomials,
    with_relative_spectrum,
    random_unitary,
    random_kahler_form,
)
from tests.oracles import restricted_by_enumeration, symmetric_by_enumeration
from tests.strategies import positive_spectra, rational_spectra


class TestSymmetric:

    def test_examples(self):
        assert elementary_symmetric([1.0, 2.0, 3.0], 2) == pytest.approx(11.0)
        assert elementary_symmetric([1.0, 1.0, 1.0], 3) == pytest.approx(1.0)
        assert elementary_symmetric([4.0, -2.0], 0) == 1.0
        assert elementary_symmetric([4.0, -2.0], -1) == 0.0

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            elementary_symmetric([1.0, 2.0], 3)
        with pytest.raises(DomainError):
            elementary_symmetric([1.0, 2.0], -2)

    def test_vector_form(self):
        assert symmetric_polynomials(np.array([1.0, 2.0, 3.0])).tolist() == [1.0, 6.0, 11.0, 6.0]

    def test_batched(self):
        lam = np.array([[1.0, 2.0, 3.0], [1.0, 1.0, 1.0]])
        np.testing.assert_allclose(elementary_symmetric(lam, 2), [11.0, 3.0])

    @seed(11)
    @settings(max_examples=300, deadline=None)
    @given(rational_spectra())
    def test_recurrence_matches_enumeration_exactly(self, values):
        lam = np.array(values, dtype=object)
        s = symmetric_polynomials(lam)
        for k in range(len(values) + 1):
            assert s[k] == symmetric_by_enumeration(values, k)

    def test_restricted_examples(self):
        assert restricted_symmetric([1.0, 2.0, 3.0], 1, [0]) == pytest.approx(5.0)
        assert restricted_symmetric([1.0, 2.0, 3.0], 1, [0, 0]) == 0.0
        assert restricted_symmetric([7.0, 2.0, 3.0], 0, [2]) == 1.0

    def test_restricted_index_out_of_range(self):
        with pytest.raises(DomainError):
            restricted_symmetric([1.0, 2.0], 1, [2])

    @seed(12)
    @settings(max_examples=150, deadline=None)
    @given(rational_spectra(min_size=2), st.data())
    def test_restricted_matches_enumeration(self, values, data):
        n = len(values)
        k = data.draw(st.integers(0, n))
        excluded = data.draw(st.lists(st.integers(0, n - 1), max_size=2))
        lam = np.array(values, dtype=object)
        assert restricted_symmetric(lam, k, excluded) == restricted_by_enumeration(values, k, excluded)


class TestSpectrumTypes:

    def test_spectrum_sorted(self):
        with pytest.raises(DomainError):
            Spectrum(np.array([2.0, 1.0]))
        assert Spectrum.of([3.0, 1.0, 2.0]).tolist() == [1.0, 2.0, 3.0]

    def test_spectrum_finite(self):
        with pytest.raises(DomainError):
            Spectrum(np.array([1.0, np.inf]))

    def test_exact_spectrum_kept(self):
        spectrum = Spectrum.of([Fraction(1, 3), Fraction(1, 2)])
        assert spectrum.values.dtype == object

    def test_hermitian_ingestion(self):
        with pytest.raises(DomainError):
            HermitianMatrix.from_array([[1.0, 2.0], [0.0, 1.0]])
        m = HermitianMatrix.from_array([[1.0, 1j], [-1j + 1e-14, 2.0]])
        assert m.entries[1, 0] == np.conj(m.entries[0, 1])


class TestPencil:

    @pytest.mark.parametrize("chi,omega,expected", [
        (2 * np.eye(2), np.eye(2), [2.0, 2.0]),
        (np.diag([1.0, 3.0]), np.eye(2), [1.0, 3.0]),
        ([[2.0, 1.0], [1.0, 2.0]], np.eye(2), [1.0, 3.0]),
        (np.diag([2.0, 6.0]), np.diag([2.0, 3.0]), [1.0, 2.0]),
    ])
    def test_relative_eigenvalues(self, chi, omega, expected):
        spectrum = relative_eigenvalues(HermitianMatrix.from_array(chi), HermitianMatrix.from_array(omega))
        np.testing.assert_allclose(spectrum.values, expected, atol=1e-12)

    def test_indefinite_reference_form(self):
        with pytest.raises(PencilError):
            relative_eigenvalues(HermitianMatrix.identity(2), HermitianMatrix.diagonal([1.0, -1.0]))

    def test_jacobi_agrees_with_lapack(self):
        rng = sample_rng(3, 0)
        matrices = np.array([random_hermitian(rng, n=4, scale=3.0) for _ in range(50)])
        np.testing.assert_allclose(jacobi_eigenvalues(matrices), np.linalg.eigvalsh(matrices), atol=1e-10)
        np.testing.assert_allclose(eigenvalues(matrices, "lapack"), np.linalg.eigvalsh(matrices))

    def test_prescribed_relative_spectrum(self):
        rng = sample_rng(5, 1)
        omega = random_kahler_form(rng, 3)
        values = np.array([-1.0, 0.5, 4.0])
        a = with_relative_spectrum(omega, values, random_unitary(rng, 3))
        np.testing.assert_allclose(relative_eigenvalue_field(a, omega), values, atol=1e-10)

    def test_unknown_solver(self):
        with pytest.raises(DomainError):
            eigenvalues(np.eye(2), "power")


class TestInequalities:

    @seed(21)
    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 6).flatmap(positive_spectra))
    def test_newton_maclaurin(self, values):
        assert np.all(newton_maclaurin_margin(np.array(values)) >= -1e-10)

    def test_newton_maclaurin_equal_entries(self):
        np.testing.assert_allclose(newton_maclaurin_margin([2.0, 2.0, 2.0]), 0.0, atol=1e-12)

    def test_newton_maclaurin_needs_positive(self):
        with pytest.raises(DomainError):
            newton_maclaurin_margin([0.0, 1.0])

    def test_majorization(self):
        assert majorizes([3.0, 1.0], [2.0, 2.0])
        assert not majorizes([2.0, 2.0], [3.0, 1.0])
        assert not majorizes([3.0, 1.0], [2.0, 1.0])

    def test_ky_fan_for_convex_combinations(self):
        rng = sample_rng(9, 0)
        for _ in range(20):
            a, b = random_hermitian(rng, 4, 2.0), random_hermitian(rng, 4, 2.0)
            mixed = 0.3 * np.linalg.eigvalsh(a) + 0.7 * np.linalg.eigvalsh(b)
            assert majorizes(mixed, np.linalg.eigvalsh(0.3 * a + 0.7 * b))
