"""
Correlation - Spatial correlation matrices: local scattering synthesis, LoS and ISO models
"""
import logging
from dataclasses import dataclass
from enum import Enum, auto

import numpy as np
from scipy.special import ndtr, roots_legendre

from channel.geometry import AnglePair, array_response
from utils.constants import (
    DENSITY_NORMALIZATION_TOL, GAUSSIAN_TAIL_SIGMAS, PATHLOSS_REF_DB, PATHLOSS_REF_DISTANCE,
    PATHLOSS_SLOPE_DB, PSD_TOLERANCE, QUADRATURE_INITIAL_NODES, QUADRATURE_MAX_NODES,
    QUADRATURE_TOLERANCE,
)
from utils.errors import ConvergenceError, InvalidInputError
from utils.units import db_to_linear

logger = logging.getLogger(__name__)

HALF_PI = np.pi / 2

# Upper bound on complex entries held by one quadrature chunk
_CHUNK_ENTRIES = 2_000_000


class Provenance(Enum):
    """Where a correlation matrix came from"""
    SYNTHESIZED = auto()
    ISO = auto()
    LOS = auto()
    ESTIMATED = auto()


class AngularDistribution(Enum):
    """Shape of the per-axis angular density"""
    GAUSSIAN = auto()


@dataclass(frozen=True)
class ScatteringProfile:
    """
    Nominal direction, angular spreads and gain of one UE's local scattering.

    The angular density is a product of per-axis Gaussians centred at the
    nominal angles, truncated to [-pi/2, pi/2] and renormalized. A zero spread
    collapses that axis to a point mass at the nominal angle.
    """

    mean_azimuth: float
    mean_elevation: float
    spread_azimuth: float
    spread_elevation: float
    gain_beta: float = 1.0
    distribution: AngularDistribution = AngularDistribution.GAUSSIAN

    def __post_init__(self):
        # Validates the nominal direction
        AnglePair(self.mean_azimuth, self.mean_elevation)
        if self.spread_azimuth < 0 or self.spread_elevation < 0:
            raise InvalidInputError("angular spreads must be nonnegative")
        if not self.gain_beta > 0:
            raise InvalidInputError(f"gain_beta must be positive, got {self.gain_beta}")

    @classmethod
    def from_degrees(cls, mean_azimuth_deg, mean_elevation_deg, spread_azimuth_deg,
                     spread_elevation_deg, gain_beta=1.0):
        return cls(*(float(np.deg2rad(v)) for v in (mean_azimuth_deg, mean_elevation_deg,
                                                   spread_azimuth_deg, spread_elevation_deg)),
                   gain_beta=gain_beta)

    @property
    def nominal_angle(self):
        return AnglePair(self.mean_azimuth, self.mean_elevation)

    def axis_density(self, x, axis):
        """
        Truncated, renormalized Gaussian density of one axis

        Args:
            x (numpy.ndarray): Angles in radians
            axis (str): "azimuth" or "elevation"

        Returns:
            numpy.ndarray: Density values (zero outside [-pi/2, pi/2])
        """
        mean, spread = self._axis(axis)
        if spread == 0:
            raise InvalidInputError(f"{axis} has zero spread; its density is a point mass")
        x = np.asarray(x, dtype=float)
        mass = ndtr((HALF_PI - mean) / spread) - ndtr((-HALF_PI - mean) / spread)
        pdf = np.exp(-0.5 * ((x - mean) / spread) ** 2) / (np.sqrt(2 * np.pi) * spread * mass)
        return np.where(np.abs(x) <= HALF_PI, pdf, 0.0)

    def axis_support(self, axis):
        """Integration interval of one axis (the Gaussian tails beyond it are negligible)"""
        mean, spread = self._axis(axis)
        return (max(-HALF_PI, mean - GAUSSIAN_TAIL_SIGMAS * spread),
                min(HALF_PI, mean + GAUSSIAN_TAIL_SIGMAS * spread))

    def density_mass(self, nodes=64):
        """
        Integral of the angular density over the truncated support, by quadrature

        Returns:
            float: Should equal 1 within DENSITY_NORMALIZATION_TOL
        """
        mass = 1.0
        for axis in ("azimuth", "elevation"):
            _, spread = self._axis(axis)
            if spread == 0:
                continue
            x, w = _legendre_nodes(*self.axis_support(axis), nodes)
            mass *= float(np.sum(w * self.axis_density(x, axis)))
        return mass

    def is_normalized(self, nodes=64):
        return abs(self.density_mass(nodes) - 1.0) <= DENSITY_NORMALIZATION_TOL

    def axis_rule(self, axis, nodes):
        """
        Quadrature nodes and density-weighted weights of one axis, summing to one

        Returns:
            tuple: (angles, weights)
        """
        mean, spread = self._axis(axis)
        if spread == 0:
            return np.array([mean]), np.array([1.0])
        x, w = _legendre_nodes(*self.axis_support(axis), nodes)
        weights = w * self.axis_density(x, axis)
        return x, weights / weights.sum()

    def _axis(self, axis):
        if axis == "azimuth":
            return self.mean_azimuth, self.spread_azimuth
        if axis == "elevation":
            return self.mean_elevation, self.spread_elevation
        raise InvalidInputError(f"unknown axis {axis!r}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensorized Gauss-Legendre rule with optional node doubling until entries settle"""

    nodes: int = QUADRATURE_INITIAL_NODES
    scheme: str = "gauss-legendre"
    adaptive: bool = True
    tolerance: float = QUADRATURE_TOLERANCE
    max_nodes: int = QUADRATURE_MAX_NODES

    def __post_init__(self):
        if self.scheme != "gauss-legendre":
            raise InvalidInputError(f"unsupported quadrature scheme {self.scheme!r}")
        if self.nodes < 2:
            raise InvalidInputError("quadrature needs at least 2 nodes per axis")


class CorrelationMatrix:
    """Hermitian N x N spatial correlation matrix with a provenance tag"""

    def __init__(self, entries, provenance, validate=True):
        """
        Initialize a correlation matrix

        Args:
            entries (array_like): Square complex matrix; symmetrized as (R + R^H) / 2
            provenance (Provenance): Origin of the matrix
            validate (bool): Check positive semidefiniteness (skipped for estimates)
        """
        entries = np.array(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidInputError(f"correlation matrix must be square, got shape {entries.shape}")

        self.entries = (entries + entries.conj().T) / 2
        self.entries.setflags(write=False)
        self.provenance = provenance

        if validate and provenance is not Provenance.ESTIMATED and not self.is_psd():
            raise InvalidInputError(
                f"{provenance.name} correlation matrix is indefinite "
                f"(min eigenvalue {self.min_eigenvalue():.3e})")

    @property
    def n(self):
        return self.entries.shape[0]

    @property
    def trace(self):
        return float(np.real(np.trace(self.entries)))

    @property
    def first_row(self):
        return np.array(self.entries[0])

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)

    def min_eigenvalue(self):
        return float(self.eigenvalues()[0])

    def is_psd(self, tolerance=PSD_TOLERANCE):
        eigenvalues = self.eigenvalues()
        scale = max(np.max(np.abs(eigenvalues)), np.finfo(float).tiny)
        return eigenvalues[0] >= -tolerance * scale

    def __repr__(self):
        return f"CorrelationMatrix(n={self.n}, provenance={self.provenance.name})"


def path_loss(distance):
    """
    Average channel gain at a given distance

    Args:
        distance (float): Distance in meters

    Returns:
        float: Linear gain beta
    """
    if not distance > 0:
        raise InvalidInputError(f"distance must be positive, got {distance}")
    gain_db = PATHLOSS_REF_DB - PATHLOSS_SLOPE_DB * np.log10(distance / PATHLOSS_REF_DISTANCE)
    return float(db_to_linear(gain_db))


def synthesize_correlation(geometry, profile, quadrature=None):
    """
    Correlation matrix of the 3D local scattering model by numerical quadrature

    Entries only depend on the horizontal and vertical index lags, so the
    integral is evaluated once per lag pair and scattered into the matrix.

    Args:
        geometry (ArrayGeometry): Array layout
        profile (ScatteringProfile): Angular density and gain
        quadrature (QuadratureSpec, optional): Rule; adaptive Gauss-Legendre by default

    Returns:
        CorrelationMatrix: Synthesized matrix with diagonal equal to beta
    """
    quadrature = quadrature or QuadratureSpec()
    collapsed = profile.spread_azimuth == 0 and profile.spread_elevation == 0

    nodes = quadrature.nodes
    worst_change, worst_index = float("inf"), None
    table = _lag_table(geometry, profile, nodes)
    if quadrature.adaptive and not collapsed:
        while True:
            if nodes * 2 > quadrature.max_nodes:
                raise ConvergenceError(
                    f"quadrature did not settle within {quadrature.max_nodes} nodes per axis "
                    f"(worst relative change {worst_change:.3e} at lag {worst_index})",
                    worst_index=worst_index, worst_change=worst_change)
            nodes *= 2
            refined = _lag_table(geometry, profile, nodes)
            change = np.abs(refined - table) / np.max(np.abs(refined))
            flat = int(np.argmax(change))
            worst_change = float(change.flat[flat])
            worst_index = _lag_of(np.unravel_index(flat, change.shape), geometry)
            table = refined
            logger.debug("quadrature with %d nodes/axis: max relative change %.2e", nodes, worst_change)
            if worst_change < quadrature.tolerance:
                break

    i, j = geometry.indices()
    di = i[:, None] - i[None, :] + geometry.n_h - 1
    dj = j[:, None] - j[None, :] + geometry.n_v - 1
    return CorrelationMatrix(profile.gain_beta * table[dj, di], Provenance.SYNTHESIZED)


def _lag_table(geometry, profile, nodes):
    """Integral of exp(j k^T (u_m - u_l)) f over all (vertical lag, horizontal lag) pairs"""
    phi, w_phi = profile.axis_rule("azimuth", nodes)
    theta, w_theta = profile.axis_rule("elevation", nodes)

    lags_h = np.arange(-(geometry.n_h - 1), geometry.n_h)
    lags_v = np.arange(-(geometry.n_v - 1), geometry.n_v)
    c_h = 2 * np.pi * geometry.delta_h / geometry.wavelength
    c_v = 2 * np.pi * geometry.delta_v / geometry.wavelength

    table = np.zeros((lags_v.size, lags_h.size), dtype=complex)
    chunk = max(1, _CHUNK_ENTRIES // (phi.size * lags_h.size))
    for start in range(0, theta.size, chunk):
        t = theta[start:start + chunk]
        w_t = w_theta[start:start + chunk]

        # Azimuth integral for each elevation node: r_h[q, lag]
        phase_h = c_h * np.cos(t)[:, None, None] * np.sin(phi)[None, :, None] * lags_h[None, None, :]
        r_h = np.einsum("p,qpd->qd", w_phi, np.exp(1j * phase_h))

        # Elevation integral of the vertical phase times r_h
        b_v = np.exp(1j * c_v * np.sin(t)[:, None] * lags_v[None, :])
        table += np.einsum("q,qv,qd->vd", w_t, b_v, r_h)
    return table


def _lag_of(index, geometry):
    dv, dh = index
    return int(dv) - (geometry.n_v - 1), int(dh) - (geometry.n_h - 1)


def _legendre_nodes(a, b, nodes):
    x, w = roots_legendre(nodes)
    half = (b - a) / 2
    return half * x + (a + b) / 2, half * w


def los_correlation(geometry, angle, gain_beta):
    """
    Rank-one correlation of a single plane wave: beta * a a^H

    Args:
        geometry (ArrayGeometry): Array layout
        angle (AnglePair): Direction of the plane wave
        gain_beta (float): Average channel gain

    Returns:
        CorrelationMatrix: LoS matrix with trace N * beta
    """
    if not gain_beta > 0:
        raise InvalidInputError("gain_beta must be positive")
    a = array_response(geometry, angle)
    return CorrelationMatrix(gain_beta * np.outer(a, a.conj()), Provenance.LOS)


def iso_correlation(geometry):
    """
    Correlation of isotropic scattering in front of the array

    Entry (m, l) is sinc(2 * sqrt(dh^2 + dv^2)) with the index offsets measured in wavelengths.

    Args:
        geometry (ArrayGeometry): Array layout

    Returns:
        CorrelationMatrix: Real symmetric matrix with unit diagonal
    """
    i, j = geometry.indices()
    delta_h = (i[:, None] - i[None, :]) * geometry.delta_h / geometry.wavelength
    delta_v = (j[:, None] - j[None, :]) * geometry.delta_v / geometry.wavelength
    return CorrelationMatrix(np.sinc(2 * np.sqrt(delta_h ** 2 + delta_v ** 2)), Provenance.ISO)
