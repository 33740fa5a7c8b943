"""Tests for array layout, wave vectors and array responses."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from channel.geometry import AnglePair, ArrayGeometry, array_response, axis_responses, wave_vector
from conftest import make_geometry
from utils.constants import WAVELENGTH
from utils.errors import InvalidInputError


# ============================================================================
# ANTENNA INDEXING
# ============================================================================


class TestAntennaIndex:
    """1-based antenna numbers map to (horizontal, vertical) indices row by row."""

    def test_first_antenna_is_origin(self):
        assert make_geometry(4, 3).antenna_index(1) == (0, 0)

    def test_row_major_numbering(self):
        assert make_geometry(4, 3).antenna_index(6) == (1, 1)

    def test_first_element_of_second_row(self):
        geometry = make_geometry(4, 3)
        assert geometry.antenna_index(geometry.n_h + 1) == (0, 1)

    @pytest.mark.parametrize("n", [0, 13, 2.5])
    def test_out_of_range_rejected(self, n):
        with pytest.raises(InvalidInputError, match="antenna number"):
            make_geometry(4, 3).antenna_index(n)

    def test_indices_match_antenna_index(self):
        geometry = make_geometry(5, 3)
        i, j = geometry.indices()
        for n in range(1, geometry.n + 1):
            assert (i[n - 1], j[n - 1]) == geometry.antenna_index(n)


class TestAntennaPosition:
    def test_origin(self):
        assert_allclose(make_geometry(4, 4).antenna_position(1), [0.0, 0.0, 0.0])

    def test_spacing_arithmetic(self):
        geometry = ArrayGeometry(4, 2, 0.025, 0.025, WAVELENGTH)
        assert_allclose(geometry.antenna_position(6), [0.0, 0.025, 0.025])

    def test_last_element_of_2x2(self):
        geometry = ArrayGeometry(2, 2, 0.05, 0.05, WAVELENGTH)
        assert_allclose(geometry.antenna_position(4), [0.0, 0.05, 0.05])

    def test_positions_stack(self):
        geometry = make_geometry(3, 2)
        expected = np.array([geometry.antenna_position(n) for n in range(1, 7)])
        assert_allclose(geometry.positions(), expected)

    def test_invalid_shape_rejected(self):
        with pytest.raises(InvalidInputError, match="antenna counts"):
            ArrayGeometry(0, 4, 0.025, 0.025, WAVELENGTH)

    def test_invalid_spacing_rejected(self):
        with pytest.raises(InvalidInputError, match="spacings"):
            ArrayGeometry(4, 4, 0.0, 0.025, WAVELENGTH)


# ============================================================================
# WAVE VECTOR AND ARRAY RESPONSE
# ============================================================================


class TestWaveVector:
    @pytest.mark.parametrize(
        "azimuth, elevation, expected",
        [(0.0, 0.0, [1, 0, 0]), (np.pi / 2, 0.0, [0, 1, 0]), (0.0, np.pi / 2, [0, 0, 1])],
    )
    def test_axis_directions(self, azimuth, elevation, expected):
        k = wave_vector(AnglePair(azimuth, elevation), WAVELENGTH)
        assert_allclose(k, 2 * np.pi / WAVELENGTH * np.array(expected), atol=1e-9)

    def test_norm(self):
        k = wave_vector(AnglePair(0.3, -0.7), WAVELENGTH)
        assert np.linalg.norm(k) == pytest.approx(2 * np.pi / WAVELENGTH)

    def test_angle_outside_half_space_rejected(self):
        with pytest.raises(InvalidInputError, match="azimuth"):
            AnglePair(2.0, 0.0)


class TestArrayResponse:
    def test_broadside_is_all_ones(self):
        a = array_response(make_geometry(4, 4), AnglePair(0.0, 0.0))
        assert_allclose(a, np.ones(16))

    def test_half_wavelength_endfire(self):
        geometry = ArrayGeometry(2, 1, WAVELENGTH / 2, WAVELENGTH / 2, WAVELENGTH)
        assert_allclose(array_response(geometry, AnglePair(np.pi / 2, 0.0)), [1.0, -1.0], atol=1e-12)

    def test_matches_elementwise_oracle(self, rng):
        geometry = make_geometry(4, 2)
        angle = AnglePair(*rng.uniform(-np.pi / 2, np.pi / 2, size=2))
        k = wave_vector(angle, geometry.wavelength)
        expected = [np.exp(1j * k @ geometry.antenna_position(n)) for n in range(1, geometry.n + 1)]
        assert_allclose(array_response(geometry, angle), expected, rtol=1e-12)

    def test_unit_modulus(self):
        a = array_response(make_geometry(5, 3), AnglePair(0.4, 0.2))
        assert_allclose(np.abs(a), 1.0)

    def test_axis_responses_kronecker(self):
        geometry = make_geometry(4, 3)
        angle = AnglePair(-0.6, 0.5)
        a_h, a_v = axis_responses(geometry, angle)
        assert_allclose(np.kron(a_v, a_h), array_response(geometry, angle), rtol=1e-12)
