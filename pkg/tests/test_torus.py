from math import pi

import numpy as np
import pytest

from core.errors import DegenerateField, DomainError, GridMismatch, ResolutionError
from gma import GmaCoefficients
from spectra import HermitianMatrix
from torus import (
    FormField,
    MollifierSpec,
    PotentialField,
    TorusGrid,
    chi_from_potential,
    decode_snapshot,
    dz,
    encode_snapshot,
    f_form_pairing,
    gma_j_energy,
    i_ddbar,
    integrate,
    intersection_numbers,
    l1_distance,
    laplacian,
    linf_distance,
    ma_energy,
    ma_energy_gradient,
    mollify,
    normalize_sup,
    perturbation_weight,
    read_potential_csv,
    read_snapshot,
    solve_ddbar_trace,
    wedge_ratio,
    write_snapshot,
    write_snapshot_csv,
)


def _mixed_potential(grid: TorusGrid) -> PotentialField:
    return PotentialField.from_function(
        grid, lambda x, y: 0.05 * np.cos(2 * pi * x[0]) + 0.02 * np.sin(2 * pi * (y[0] + x[-1]))
    )


class TestGrid:

    @pytest.mark.parametrize("n,N", [(4, 8), (2, 9), (2, 6)])
    def test_rejected(self, n, N):
        with pytest.raises(DomainError):
            TorusGrid(n, N)

    def test_shape(self, grid2):
        assert grid2.shape == (12, 12, 12, 12)
        assert grid2.spacing == pytest.approx(1 / 12)

    def test_fields_are_frozen(self, grid1):
        phi = PotentialField.constant(grid1, 1.0)
        with pytest.raises(ValueError):
            phi.values[0, 0] = 2.0

    def test_non_finite_rejected(self, grid1):
        values = np.zeros(grid1.shape)
        values[0, 0] = np.nan
        with pytest.raises(DomainError):
            PotentialField(grid1, values)

    def test_grid_mismatch(self, grid1):
        with pytest.raises(GridMismatch):
            PotentialField.constant(grid1) + PotentialField.constant(TorusGrid(1, 8))

    def test_hessian_part_needs_zero_mean(self, grid1):
        hessian = np.ones(grid1.shape + (1, 1))
        with pytest.raises(DomainError):
            FormField(grid1, HermitianMatrix.identity(1), hessian)


class TestSpectral:

    def test_ddbar_of_cosine(self, grid1, cosine_potential):
        phi = cosine_potential(grid1, amplitude=1.0)
        x, _ = grid1.coordinates()
        np.testing.assert_allclose(i_ddbar(phi)[..., 0, 0].real, -pi ** 2 * np.cos(2 * pi * x[0]), atol=1e-10)

    def test_form_mean_is_background(self, grid2):
        background = HermitianMatrix.from_array([[2.0, 0.5j], [-0.5j, 3.0]])
        field = chi_from_potential(background, _mixed_potential(grid2))
        np.testing.assert_allclose(field.mean(), background.entries, atol=1e-12)
        np.testing.assert_allclose(field.matrices, np.conj(np.swapaxes(field.matrices, -1, -2)), atol=1e-12)

    def test_trace_inverts_laplacian(self, grid2):
        f = _mixed_potential(grid2) + 1.0
        omega = HermitianMatrix.diagonal([1.0, 2.0])
        phi = solve_ddbar_trace(f, omega)
        assert phi.mean() == pytest.approx(0.0, abs=1e-14)
        np.testing.assert_allclose(laplacian(phi, omega).values, f.values - f.mean(), atol=1e-10)

    def test_dz_of_cosine(self, grid1, cosine_potential):
        x, _ = grid1.coordinates()
        gradient = dz(cosine_potential(grid1, amplitude=1.0))
        np.testing.assert_allclose(gradient[..., 0], -pi * np.sin(2 * pi * x[0]), atol=1e-10)

    def test_dealiasing_removes_high_modes(self, grid1):
        phi = PotentialField.from_function(grid1, lambda x, y: np.cos(2 * pi * 7 * x[0]))
        assert np.max(np.abs(i_ddbar(phi, dealias=True))) < 1e-9


class TestMeasure:

    def test_integrate_is_grid_mean(self, grid1, cosine_potential):
        phi = cosine_potential(grid1) + 2.0
        assert integrate(phi) == pytest.approx(2.0)
        assert integrate(phi, omega=HermitianMatrix.diagonal([3.0]), absolute=True) == pytest.approx(6.0)

    def test_distances(self, grid1, cosine_potential):
        phi = cosine_potential(grid1, amplitude=1.0)
        zero = PotentialField.constant(grid1)
        assert linf_distance(phi, zero) == pytest.approx(1.0)
        assert l1_distance(phi, zero) == pytest.approx(2 / pi, rel=2e-2)
        assert normalize_sup(phi).max() == 0.0

    def test_wedge_ratio_on_constant_form(self, grid2):
        field = FormField.constant(grid2, HermitianMatrix.identity(2, 2.0))
        identity = HermitianMatrix.identity(2)
        assert wedge_ratio(field, identity, 2).values == pytest.approx(4.0)
        assert wedge_ratio(field, identity, 1).values == pytest.approx(2.0)
        assert wedge_ratio(field, identity, 0).values == pytest.approx(1.0)

    def test_mollify_preserves_mean(self, grid2):
        phi = _mixed_potential(grid2) + 0.3
        smoothed = mollify(phi, MollifierSpec(2 * grid2.spacing))
        assert smoothed.mean() == pytest.approx(phi.mean(), abs=1e-14)
        assert smoothed.max() <= phi.max() + 1e-14

    def test_mollifier_below_spacing(self, grid2):
        with pytest.raises(ResolutionError):
            mollify(PotentialField.constant(grid2), MollifierSpec(0.5 * grid2.spacing))

    def test_mollifier_radius_positive(self):
        with pytest.raises(DomainError):
            MollifierSpec(0.0)


class TestEnergies:

    def test_ma_energy_vanishes_at_zero(self, grid2):
        assert ma_energy(HermitianMatrix.identity(2, 2.0), PotentialField.constant(grid2)) == 0.0

    def test_ma_energy_gradient_is_volume_ratio(self, grid2):
        gradient = ma_energy_gradient(HermitianMatrix.identity(2, 2.0), PotentialField.constant(grid2))
        np.testing.assert_allclose(gradient.values, 4.0)

    def test_ma_energy_needs_positivity(self, grid1, cosine_potential):
        with pytest.raises(DegenerateField):
            ma_energy(HermitianMatrix.identity(1, 0.5), cosine_potential(grid1, amplitude=1.0))

    def test_j_energy_vanishes_at_zero(self, grid2, desk_coeffs, identity2):
        background = HermitianMatrix.identity(2, 2.0)
        assert gma_j_energy(background, identity2, desk_coeffs, PotentialField.constant(grid2)) == 0.0

    def test_perturbation_weight(self, identity2):
        assert perturbation_weight(HermitianMatrix.identity(2, 2.0), identity2, 0.1) == pytest.approx(0.025)

    @pytest.mark.parametrize("k", [1, 2])
    def test_f_form_pairing_nonpositive(self, grid2, k):
        chi = HermitianMatrix.diagonal([1.0, 3.0])
        omega = HermitianMatrix.diagonal([1.0, 2.0])
        assert f_form_pairing(chi, omega, _mixed_potential(grid2), k) <= 1e-12

    def test_f_form_pairing_top_degree_vanishes(self, grid2, identity2):
        value = f_form_pairing(HermitianMatrix.identity(2, 2.0), identity2, _mixed_potential(grid2), 2)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_f_form_pairing_range(self, grid2, identity2):
        with pytest.raises(DomainError):
            f_form_pairing(identity2, identity2, PotentialField.constant(grid2), 3)


class TestIntersection:

    def test_forced_c0(self):
        report = intersection_numbers(HermitianMatrix.identity(2, 2.0), HermitianMatrix.identity(2),
                                      GmaCoefficients(2, (1.0,)))
        assert report.exact and report.forced_c0 == 2.0
        assert report.details["forced_c0_exact"] == "2"
        assert [m.value for m in report.margins] == [3.0, 3.0, 4.0]
        assert report.positive and report.first_failure is None

    def test_failure_is_reported(self):
        report = intersection_numbers(HermitianMatrix.identity(2), HermitianMatrix.identity(2),
                                      GmaCoefficients(2, (1.0,)))
        failure = report.first_failure
        assert not report.positive
        assert (failure.p, failure.subset, failure.value) == (2, (0, 1), 0.0)

    def test_non_commuting_needs_reduction(self):
        chi = HermitianMatrix.from_array([[2.0, 1.0], [1.0, 2.0]])
        omega = HermitianMatrix.diagonal([1.0, 2.0])
        coeffs = GmaCoefficients(2, (1.0,))
        with pytest.raises(DomainError):
            intersection_numbers(chi, omega, coeffs)
        report = intersection_numbers(chi, omega, coeffs, reduce_pencil=True)
        assert report.basis == "pencil" and not report.exact

    def test_non_diagonal_commuting_class(self):
        # eigenvalues of chi are (1, 3); coordinate lines see the diagonal entries 2
        chi = HermitianMatrix.from_array([[2.0, 1.0], [1.0, 2.0]])
        report = intersection_numbers(chi, HermitianMatrix.identity(2), GmaCoefficients(2, (1.0,)))
        assert not chi.is_diagonal() and not report.exact
        assert report.forced_c0 == pytest.approx(1.0)
        assert [m.value for m in report.margins] == pytest.approx([3.0, 3.0, 2.0])

    def test_commuting_float_path(self):
        chi = HermitianMatrix.from_array([[2.0, 1.0], [1.0, 2.0]])
        report = intersection_numbers(chi, HermitianMatrix.identity(2), GmaCoefficients(2, (0.0,)))
        assert report.basis == "coordinates" and not report.exact
        # forced c0 = det chi
        assert report.forced_c0 == pytest.approx(3.0)


class TestSnapshots:

    def test_potential_round_trip(self, grid2, tmp_path):
        phi = _mixed_potential(grid2)
        path = write_snapshot(tmp_path / "phi.hfld", phi)
        restored = read_snapshot(path)
        assert restored.grid == grid2
        np.testing.assert_array_equal(restored.values, phi.values)

    def test_form_round_trip(self, grid1, cosine_potential):
        field = chi_from_potential(HermitianMatrix.identity(1, 2.0), cosine_potential(grid1))
        restored = decode_snapshot(encode_snapshot(field))
        np.testing.assert_array_equal(restored.hessian, field.hessian)
        np.testing.assert_array_equal(restored.background.entries, field.background.entries)

    def test_header(self, grid1):
        payload = encode_snapshot(PotentialField.constant(grid1))
        assert payload[:4] == b"HFLD" and len(payload) == 16 + grid1.size * 8

    @pytest.mark.parametrize("mutate", [
        lambda p: b"XXXX" + p[4:],
        lambda p: p[:-8],
        lambda p: p[:10],
    ])
    def test_corrupt_payloads(self, grid1, mutate):
        with pytest.raises(DomainError):
            decode_snapshot(mutate(encode_snapshot(PotentialField.constant(grid1))))

    def test_csv_round_trip(self, grid1, cosine_potential, tmp_path):
        phi = cosine_potential(grid1)
        path = write_snapshot_csv(tmp_path / "phi.csv", phi)
        np.testing.assert_array_equal(read_potential_csv(path, grid1).values, phi.values)

    def test_csv_grid_checked(self, grid1, tmp_path):
        path = write_snapshot_csv(tmp_path / "phi.csv", PotentialField.constant(grid1))
        with pytest.raises(DomainError):
            read_potential_csv(path, TorusGrid(1, 8))
