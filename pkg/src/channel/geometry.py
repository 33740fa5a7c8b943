"""
Geometry - Uniform planar/linear array layout, wave vectors and array responses
"""
from dataclasses import dataclass

import numpy as np

from utils.errors import InvalidInputError

HALF_PI = np.pi / 2


@dataclass(frozen=True)
class AnglePair:
    """Azimuth/elevation pair in radians, both within the half-space in front of the array"""

    azimuth: float
    elevation: float

    def __post_init__(self):
        for name in ("azimuth", "elevation"):
            value = getattr(self, name)
            if not np.isfinite(value) or abs(value) > HALF_PI + 1e-12:
                raise InvalidInputError(f"{name} must lie in [-pi/2, pi/2], got {value}")

    @classmethod
    def from_degrees(cls, azimuth_deg, elevation_deg):
        return cls(float(np.deg2rad(azimuth_deg)), float(np.deg2rad(elevation_deg)))


@dataclass(frozen=True)
class ArrayGeometry:
    """
    UPA in the yz-plane with n_v rows of n_h elements.

    Antenna numbers are 1-based at the API boundary; element n sits at
    horizontal index i = (n-1) mod n_h and vertical index j = (n-1) // n_h,
    so vectors run along a row first. This is the ordering under which a
    UPA correlation matrix factors as R_V kron R_H.
    """

    n_h: int
    n_v: int
    delta_h: float
    delta_v: float
    wavelength: float

    def __post_init__(self):
        if int(self.n_h) != self.n_h or int(self.n_v) != self.n_v or self.n_h < 1 or self.n_v < 1:
            raise InvalidInputError(f"antenna counts must be positive integers, got n_h={self.n_h}, n_v={self.n_v}")
        if not (self.delta_h > 0 and self.delta_v > 0 and self.wavelength > 0):
            raise InvalidInputError("spacings and wavelength must be positive")

    @property
    def n(self):
        """Total number of antennas"""
        return self.n_h * self.n_v

    @property
    def is_ula(self):
        return self.n_h == 1 or self.n_v == 1

    def antenna_index(self, n):
        """
        Horizontal and vertical index of antenna n

        Args:
            n (int): 1-based antenna number

        Returns:
            tuple: (i, j) with 0 <= i < n_h and 0 <= j < n_v
        """
        if int(n) != n or not 1 <= n <= self.n:
            raise InvalidInputError(f"antenna number must be in [1, {self.n}], got {n}")
        return (n - 1) % self.n_h, (n - 1) // self.n_h

    def antenna_position(self, n):
        """
        Location of antenna n in meters

        Args:
            n (int): 1-based antenna number

        Returns:
            numpy.ndarray: [0, i*delta_h, j*delta_v]
        """
        i, j = self.antenna_index(n)
        return np.array([0.0, i * self.delta_h, j * self.delta_v])

    def indices(self):
        """0-based (i, j) index arrays for all antennas in vector order"""
        flat = np.arange(self.n)
        return flat % self.n_h, flat // self.n_h

    def positions(self):
        """All antenna positions as an (N, 3) array"""
        i, j = self.indices()
        return np.column_stack([np.zeros(self.n), i * self.delta_h, j * self.delta_v])


def wave_vector(angle, wavelength):
    """
    Wave vector of a plane wave arriving from the given direction

    Args:
        angle (AnglePair): Direction of arrival
        wavelength (float): Wavelength in meters

    Returns:
        numpy.ndarray: 3-vector in rad/m with norm 2*pi/wavelength
    """
    if wavelength <= 0:
        raise InvalidInputError("wavelength must be positive")
    phi, theta = angle.azimuth, angle.elevation
    return (2 * np.pi / wavelength) * np.array([
        np.cos(theta) * np.cos(phi),
        np.cos(theta) * np.sin(phi),
        np.sin(theta),
    ])


def array_response(geometry, angle):
    """
    Array response vector with entries exp(j k^T u_n)

    Args:
        geometry (ArrayGeometry): Array layout
        angle (AnglePair): Direction of arrival

    Returns:
        numpy.ndarray: Complex vector of length N with unit-modulus entries
    """
    phase = geometry.positions() @ wave_vector(angle, geometry.wavelength)
    return np.exp(1j * phase)


def axis_responses(geometry, angle):
    """
    Horizontal and vertical phase vectors whose Kronecker product is the array response

    Returns:
        tuple: (a_h of length n_h, a_v of length n_v) with array_response = kron(a_v, a_h)
    """
    k = wave_vector(angle, geometry.wavelength)
    a_h = np.exp(1j * k[1] * geometry.delta_h * np.arange(geometry.n_h))
    a_v = np.exp(1j * k[2] * geometry.delta_v * np.arange(geometry.n_v))
    return a_h, a_v
