"""Tests for Kronecker (KBA, NKP), circulant and combined approximations."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import dft

from channel.approximation import (
    CirculantSpectrum, KroneckerFactors, KroneckerMethod, circulant_approximation, kba_dft_factors, kba_factors,
    nkp_factors, nsae_a, nsae_r, rearrange,
)
from channel.correlation import ScatteringProfile, synthesize_correlation
from conftest import make_geometry, random_hermitian, random_psd
from utils.errors import ConvergenceError, DegenerateInputError, InvalidInputError


@pytest.fixture(scope="module")
def correlated_8x8():
    profile = ScatteringProfile.from_degrees(20.0, -10.0, 10.0, 10.0)
    return synthesize_correlation(make_geometry(8, 8), profile)


# ============================================================================
# KBA
# ============================================================================


class TestKbaFactors:
    def test_exact_for_kronecker_input(self, rng):
        x = random_hermitian(rng, 4) + 3 * np.eye(4)
        y = random_hermitian(rng, 3) + 3 * np.eye(3)
        R = np.kron(y, x)
        factors = kba_factors(R, 4, 3)
        assert_allclose(factors.kron(), R, atol=1e-12)

    def test_vertical_factor_normalized(self, correlated_8x8):
        factors = kba_factors(correlated_8x8, 8, 8)
        assert factors.r_v[0, 0] == pytest.approx(1.0)
        assert factors.method is KroneckerMethod.KBA

    def test_single_row_is_the_matrix(self, rng):
        R = random_psd(rng, 6)
        factors = kba_factors(R, 6, 1)
        assert_allclose(factors.r_v, [[1.0]])
        assert_allclose(factors.r_h, R)

    def test_exact_at_zero_elevation_spread(self):
        profile = ScatteringProfile.from_degrees(30.0, -20.0, 10.0, 0.0)
        R = synthesize_correlation(make_geometry(8, 8), profile)
        assert nsae_r(R, kba_factors(R, 8, 8)) <= 1e-8

    def test_error_non_decreasing_in_elevation_spread(self):
        geometry = make_geometry(8, 8)
        errors = []
        for sigma_theta_deg in np.arange(0.0, 45.0, 5.0):
            R = synthesize_correlation(geometry, ScatteringProfile.from_degrees(10.0, -5.0, 10.0, sigma_theta_deg))
            errors.append(nsae_r(R, kba_factors(R, 8, 8)))
        for narrower, wider in zip(errors, errors[1:]):
            assert wider >= narrower - 1e-6

    def test_zero_pivot_rejected(self):
        R = np.zeros((4, 4))
        R[1, 1] = 1.0
        with pytest.raises(DegenerateInputError, match=r"R\[0, 0\] is zero"):
            kba_factors(R, 2, 2)

    def test_shape_mismatch_rejected(self, rng):
        with pytest.raises(InvalidInputError, match="does not match"):
            kba_factors(random_psd(rng, 6), 4, 2)


# ============================================================================
# NKP
# ============================================================================


class TestNkpFactors:
    def test_rearrangement_maps_kronecker_to_outer_product(self, rng):
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        y = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert_allclose(rearrange(np.kron(y, x), 3, 2), np.outer(y.ravel(), x.ravel()), atol=1e-12)

    def test_exact_for_kronecker_input(self, rng):
        R = np.kron(random_psd(rng, 4), random_psd(rng, 4))
        assert nsae_r(R, nkp_factors(R, 4, 4)) <= 1e-10

    @pytest.mark.parametrize("n_h, n_v", [(4, 4), (2, 8), (8, 4)])
    def test_matches_svd_oracle(self, rng, n_h, n_v):
        R = random_psd(rng, n_h * n_v)
        factors = nkp_factors(R, n_h, n_v)

        u, s, vh = np.linalg.svd(rearrange(R, n_h, n_v))
        oracle = s[0] * np.kron(u[:, 0].reshape(n_v, n_v), vh[0].reshape(n_h, n_h))
        assert np.linalg.norm(factors.kron() - oracle) <= 1e-8 * np.linalg.norm(oracle)

    def test_factors_hermitian_with_positive_trace(self, correlated_8x8):
        factors = nkp_factors(correlated_8x8, 8, 8)
        assert factors.is_hermitian()
        assert np.trace(factors.r_v).real > 0
        assert factors.method is KroneckerMethod.NKP

    def test_never_worse_than_kba(self, rng, correlated_8x8):
        matrices = [correlated_8x8.entries] + [random_psd(rng, 16) for _ in range(5)]
        for R in matrices:
            side = int(np.sqrt(R.shape[0]))
            assert nsae_r(R, nkp_factors(R, side, side)) <= nsae_r(R, kba_factors(R, side, side)) + 1e-12

    def test_zero_matrix_gives_zero_factors(self):
        factors = nkp_factors(np.zeros((4, 4)), 2, 2)
        assert not np.any(factors.kron())

    def test_iteration_cap(self, rng):
        with pytest.raises(ConvergenceError, match="stalled") as info:
            nkp_factors(random_psd(rng, 16), 4, 4, max_iterations=1)
        assert info.value.iterations == 1


# ============================================================================
# CIRCULANT
# ============================================================================


class TestCirculantApproximation:
    def test_zero_lag_kept(self):
        spectrum = circulant_approximation([2.0, 0.5 + 0.5j, 0.1])
        assert spectrum.first_row_c[0] == pytest.approx(2.0)

    def test_two_element_row(self):
        a = 0.3 - 0.7j
        spectrum = circulant_approximation([1.0, a])
        assert spectrum.first_row_c[1] == pytest.approx(a.real)

    def test_eigenvalues_match_dense_solver(self):
        R = synthesize_correlation(make_geometry(64, 1), ScatteringProfile.from_degrees(20.0, 0.0, 10.0, 0.0))
        spectrum = circulant_approximation(R.first_row)
        C = spectrum.matrix()
        assert_allclose(C, C.conj().T, atol=1e-12)
        assert_allclose(np.sort(spectrum.real_eigenvalues()), np.linalg.eigvalsh(C), atol=1e-9)

    def test_identity_row(self):
        spectrum = circulant_approximation(np.eye(5)[0])
        assert_allclose(spectrum.matrix(), np.eye(5))
        assert_allclose(spectrum.real_eigenvalues(), np.ones(5))

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_rebuilt_from_unitary_dft_basis(self, rng, n):
        spectrum = circulant_approximation(random_psd(rng, n)[0])
        F = dft(n) / np.sqrt(n)
        assert_allclose(F @ F.conj().T, np.eye(n), atol=1e-12)
        C = spectrum.matrix()
        rebuilt = (F * spectrum.eigenvalues) @ F.conj().T
        assert np.linalg.norm(rebuilt - C) <= 1e-10 * np.linalg.norm(C)

    def test_non_hermitian_row_has_complex_spectrum(self):
        row = np.array([1.0, 1j, 0.0, 0.0])
        spectrum = CirculantSpectrum(row, np.fft.fft(row))
        with pytest.raises(InvalidInputError, match="not real"):
            spectrum.real_eigenvalues()


class TestKbaDftFactors:
    def test_ula_reduces_to_circulant_of_r(self, rng):
        R = synthesize_correlation(make_geometry(16, 1), ScatteringProfile.from_degrees(10.0, 0.0, 10.0, 0.0))
        factors = kba_dft_factors(R, 16, 1)
        assert_allclose(factors.r_h, circulant_approximation(R.first_row).matrix())
        assert_allclose(factors.r_v, [[1.0]])
        assert factors.method is KroneckerMethod.KBA_DFT

    def test_factors_hermitian_circulant(self, correlated_8x8):
        factors = kba_dft_factors(correlated_8x8, 8, 8)
        assert factors.is_hermitian()
        assert_allclose(factors.r_h[1:, 1:], factors.r_h[:-1, :-1])

    def test_not_better_than_nkp(self, correlated_8x8):
        assert nsae_r(correlated_8x8, kba_dft_factors(correlated_8x8, 8, 8)) >= \
            nsae_r(correlated_8x8, nkp_factors(correlated_8x8, 8, 8)) - 1e-12


# ============================================================================
# NSAE
# ============================================================================


class TestNsae:
    def test_exact_kronecker_is_zero(self, rng):
        x, y = random_psd(rng, 3), random_psd(rng, 2)
        assert nsae_r(np.kron(y, x), KroneckerFactors(x, y, KroneckerMethod.KBA)) == pytest.approx(0.0, abs=1e-24)

    def test_zero_factors_give_one(self, rng):
        factors = KroneckerFactors(np.zeros((3, 3)), np.zeros((2, 2)), KroneckerMethod.KBA)
        assert nsae_r(random_psd(rng, 6), factors) == pytest.approx(1.0)

    def test_dense_difference_oracle(self, correlated_8x8):
        factors = kba_factors(correlated_8x8, 8, 8)
        R = correlated_8x8.entries
        expected = np.sum(np.abs(R - np.kron(factors.r_v, factors.r_h)) ** 2) / np.sum(np.abs(R) ** 2)
        assert nsae_r(correlated_8x8, factors) == pytest.approx(expected, rel=1e-10)
        assert 0 < expected < 1

    def test_nsae_a_endpoints(self, rng):
        A = random_psd(rng, 5)
        assert nsae_a(A, A) == 0.0
        assert nsae_a(A, np.zeros_like(A)) == pytest.approx(1.0)

    def test_zero_reference_rejected(self):
        with pytest.raises(DegenerateInputError, match="zero"):
            nsae_a(np.zeros((2, 2)), np.eye(2))
