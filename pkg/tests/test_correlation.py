"""Tests for local-scattering synthesis, LoS/ISO correlations and path loss."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from channel.correlation import (
    CorrelationMatrix, Provenance, QuadratureSpec, ScatteringProfile, iso_correlation,
    los_correlation, path_loss, synthesize_correlation,
)
from channel.geometry import AnglePair, ArrayGeometry, array_response
from conftest import make_geometry
from utils.constants import WAVELENGTH
from utils.errors import ConvergenceError, InvalidInputError
from utils.units import linear_to_db


# ============================================================================
# PATH LOSS
# ============================================================================


class TestPathLoss:
    @pytest.mark.parametrize("distance, expected_db", [(1000.0, -148.1), (100.0, -110.5), (10.0, -72.9)])
    def test_reference_values(self, distance, expected_db):
        assert linear_to_db(path_loss(distance)) == pytest.approx(expected_db, abs=1e-9)

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(InvalidInputError, match="distance"):
            path_loss(0.0)


# ============================================================================
# SCATTERING PROFILE
# ============================================================================


class TestScatteringProfile:
    def test_density_is_normalized(self):
        profile = ScatteringProfile.from_degrees(30.0, -10.0, 10.0, 20.0)
        assert profile.is_normalized()

    def test_truncated_density_is_normalized_near_edge(self):
        profile = ScatteringProfile.from_degrees(80.0, 0.0, 30.0, 5.0)
        assert profile.is_normalized()

    def test_axis_rule_weights_sum_to_one(self):
        profile = ScatteringProfile.from_degrees(0.0, 0.0, 10.0, 10.0)
        _, weights = profile.axis_rule("azimuth", 32)
        assert weights.sum() == pytest.approx(1.0)

    def test_zero_spread_axis_is_point_mass(self):
        profile = ScatteringProfile.from_degrees(20.0, 0.0, 10.0, 0.0)
        x, w = profile.axis_rule("elevation", 32)
        assert_allclose(x, [0.0])
        assert_allclose(w, [1.0])

    def test_negative_spread_rejected(self):
        with pytest.raises(InvalidInputError, match="spreads"):
            ScatteringProfile(0.0, 0.0, -0.1, 0.1)

    def test_nonpositive_gain_rejected(self):
        with pytest.raises(InvalidInputError, match="gain_beta"):
            ScatteringProfile(0.0, 0.0, 0.1, 0.1, gain_beta=0.0)


# ============================================================================
# SYNTHESIS
# ============================================================================


class TestSynthesizeCorrelation:
    def test_zero_spread_is_rank_one_plane_wave(self):
        geometry = make_geometry(4, 4)
        profile = ScatteringProfile.from_degrees(25.0, -15.0, 0.0, 0.0, gain_beta=2.0)
        a = array_response(geometry, profile.nominal_angle)
        R = synthesize_correlation(geometry, profile)
        assert_allclose(R.entries, 2.0 * np.outer(a, a.conj()), atol=1e-12)

    @pytest.mark.parametrize("spreads", [(10.0, 10.0), (30.0, 5.0), (0.0, 20.0)])
    def test_diagonal_equals_gain(self, spreads):
        profile = ScatteringProfile.from_degrees(10.0, -20.0, *spreads, gain_beta=3.0)
        R = synthesize_correlation(make_geometry(6, 4), profile)
        assert_allclose(np.diag(R.entries).real, 3.0, atol=1e-8)

    def test_hermitian_psd_and_read_only(self):
        R = synthesize_correlation(make_geometry(4, 4), ScatteringProfile.from_degrees(0.0, 0.0, 10.0, 10.0))
        assert_allclose(R.entries, R.entries.conj().T)
        assert R.is_psd()
        assert R.provenance is Provenance.SYNTHESIZED
        with pytest.raises(ValueError):
            R.entries[0, 0] = 0.0

    def test_block_toeplitz_structure(self):
        geometry = make_geometry(4, 3)
        R = synthesize_correlation(geometry, ScatteringProfile.from_degrees(15.0, 5.0, 10.0, 10.0)).entries
        # Entries depend on index lags only
        assert R[1, 6] == pytest.approx(R[0, 5])
        assert R[4, 9] == pytest.approx(R[0, 5])

    def test_matches_monte_carlo_integration(self):
        """16-element ULA, azimuth spread only, against 1e6 sampled angles."""
        geometry = make_geometry(16, 1)
        profile = ScatteringProfile.from_degrees(0.0, 0.0, 10.0, 0.0)
        R = synthesize_correlation(geometry, profile).entries

        rng = np.random.default_rng(7)
        phi = rng.normal(0.0, np.deg2rad(10.0), size=1_000_000)
        phi = phi[np.abs(phi) <= np.pi / 2]
        lags = np.arange(16)
        phases = np.exp(-1j * 2 * np.pi * geometry.delta_h / WAVELENGTH * np.outer(np.sin(phi), lags))
        mean = phases.mean(axis=0)
        stderr_re = phases.real.std(axis=0) / np.sqrt(phi.size)
        stderr_im = phases.imag.std(axis=0) / np.sqrt(phi.size)

        first_row = R[0]
        assert np.all(np.abs(first_row.real - mean.real) <= 4 * stderr_re + 1e-9)
        assert np.all(np.abs(first_row.imag - mean.imag) <= 4 * stderr_im + 1e-9)

    def test_non_convergence_reports_worst_entry(self):
        quadrature = QuadratureSpec(nodes=2, tolerance=1e-15, max_nodes=4)
        profile = ScatteringProfile.from_degrees(0.0, 0.0, 10.0, 10.0)
        with pytest.raises(ConvergenceError, match="did not settle") as info:
            synthesize_correlation(make_geometry(8, 8), profile, quadrature)
        assert info.value.worst_index is not None
        assert info.value.worst_change > 1e-15

    def test_fixed_rule_without_refinement(self):
        profile = ScatteringProfile.from_degrees(0.0, 0.0, 10.0, 10.0)
        coarse = synthesize_correlation(make_geometry(4, 4), profile, QuadratureSpec(nodes=64, adaptive=False))
        fine = synthesize_correlation(make_geometry(4, 4), profile)
        assert_allclose(coarse.entries, fine.entries, atol=1e-6)


# ============================================================================
# LOS AND ISO
# ============================================================================


class TestLosCorrelation:
    def test_single_antenna(self):
        R = los_correlation(make_geometry(1, 1), AnglePair(0.2, 0.1), 0.5)
        assert_allclose(R.entries, [[0.5]])

    def test_broadside_all_ones(self):
        R = los_correlation(make_geometry(3, 2), AnglePair(0.0, 0.0), 2.0)
        assert_allclose(R.entries, 2.0 * np.ones((6, 6)))

    def test_equals_zero_spread_synthesis(self, rng):
        geometry = make_geometry(4, 4)
        azimuth, elevation = rng.uniform(-1.2, 1.2, size=2)
        profile = ScatteringProfile(azimuth, elevation, 0.0, 0.0, gain_beta=1.5)
        los = los_correlation(geometry, profile.nominal_angle, 1.5)
        assert_allclose(los.entries, synthesize_correlation(geometry, profile).entries, atol=1e-10)
        assert np.linalg.matrix_rank(los.entries, tol=1e-8) == 1


class TestIsoCorrelation:
    def test_unit_diagonal(self):
        assert_allclose(np.diag(iso_correlation(make_geometry(4, 4)).entries), 1.0)

    def test_half_wavelength_ula_is_identity(self):
        geometry = ArrayGeometry(8, 1, WAVELENGTH / 2, WAVELENGTH / 2, WAVELENGTH)
        assert_allclose(iso_correlation(geometry).entries, np.eye(8), atol=1e-12)

    def test_quarter_wavelength_neighbours(self):
        R = iso_correlation(make_geometry(4, 4)).entries
        assert R[0, 1].real == pytest.approx(2 / np.pi)


class TestCorrelationMatrix:
    def test_indefinite_synthesized_rejected(self):
        with pytest.raises(InvalidInputError, match="indefinite"):
            CorrelationMatrix(np.diag([1.0, -1.0]), Provenance.SYNTHESIZED)

    def test_estimated_skips_psd_check(self):
        R = CorrelationMatrix(np.diag([1.0, -1.0]), Provenance.ESTIMATED)
        assert R.min_eigenvalue() == pytest.approx(-1.0)

    def test_non_square_rejected(self):
        with pytest.raises(InvalidInputError, match="square"):
            CorrelationMatrix(np.ones((2, 3)), Provenance.ESTIMATED)
