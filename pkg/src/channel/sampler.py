"""
Sampler - Pilot configuration, correlated channel draws and pilot observations
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from channel.correlation import CorrelationMatrix
from utils.constants import PSD_TOLERANCE, RANK_TOLERANCE
from utils.errors import InvalidInputError
from utils.units import dbm_to_watt


@dataclass(frozen=True)
class PilotConfig:
    """
    Pilot length, UE transmit power and noise power.

    sigma2 = 0 is accepted and models a noiseless uplink (gamma = inf).
    """

    tau_p: int
    rho: float
    sigma2: float

    def __post_init__(self):
        if int(self.tau_p) != self.tau_p or self.tau_p < 1:
            raise InvalidInputError(f"tau_p must be a positive integer, got {self.tau_p}")
        if not self.rho > 0:
            raise InvalidInputError(f"rho must be positive, got {self.rho}")
        if not self.sigma2 >= 0:
            raise InvalidInputError(f"sigma2 must be nonnegative, got {self.sigma2}")

    @classmethod
    def from_dbm(cls, tau_p, rho_dbm, noise_dbm):
        """
        Build a pilot configuration from dBm powers

        Args:
            tau_p (int): Pilot length in symbols
            rho_dbm (float): UE transmit power in dBm
            noise_dbm (float): Noise power in dBm

        Returns:
            PilotConfig: Configuration with powers in watts
        """
        return cls(int(tau_p), float(dbm_to_watt(rho_dbm)), float(dbm_to_watt(noise_dbm)))

    @property
    def gamma(self):
        """Transmit SNR tau_p * rho / sigma2"""
        if self.sigma2 == 0:
            return np.inf
        return self.tau_p * self.rho / self.sigma2

    @property
    def scale(self):
        """Pilot amplitude tau_p * sqrt(rho) multiplying h in the observation"""
        return self.tau_p * np.sqrt(self.rho)

    @property
    def noise_over_power(self):
        return self.sigma2 / self.rho


@dataclass(frozen=True, eq=False)
class ChannelSampler:
    """Square-root factor of a correlation matrix (factor @ factor^H = R)"""

    factor: np.ndarray

    @property
    def n(self):
        return self.factor.shape[0]

    @property
    def rank(self):
        return self.factor.shape[1]

    def covariance(self):
        return self.factor @ self.factor.conj().T


def channel_factor(R, rank_tolerance=RANK_TOLERANCE):
    """
    Factor a correlation matrix for sampling

    Args:
        R (CorrelationMatrix or numpy.ndarray): Hermitian PSD matrix
        rank_tolerance (float): Eigenvalues at or below rank_tolerance * max eigenvalue are dropped

    Returns:
        ChannelSampler: Sampler whose factor reproduces R

    Raises:
        InvalidInputError: R is indefinite beyond PSD_TOLERANCE
    """
    entries = R.entries if isinstance(R, CorrelationMatrix) else np.asarray(R, dtype=complex)
    entries = (entries + entries.conj().T) / 2
    eigenvalues, eigenvectors = eigh(entries)

    top = eigenvalues[-1] if eigenvalues.size else 0.0
    if top <= 0:
        if eigenvalues.size and eigenvalues[0] < -PSD_TOLERANCE * max(abs(eigenvalues[0]), 1.0):
            raise InvalidInputError("correlation matrix is negative definite")
        return ChannelSampler(np.zeros((entries.shape[0], 1), dtype=complex))
    if eigenvalues[0] < -PSD_TOLERANCE * top:
        raise InvalidInputError(
            f"correlation matrix is indefinite (min eigenvalue {eigenvalues[0]:.3e}); clip it before sampling")

    keep = eigenvalues > rank_tolerance * top
    factor = eigenvectors[:, keep] * np.sqrt(eigenvalues[keep])
    return ChannelSampler(factor)


def complex_normal(rng, shape):
    """
    Standard circularly-symmetric complex Gaussian draws

    Real and imaginary parts are interleaved, so the first k draws along the
    leading axis do not depend on how many are requested.
    """
    pairs = rng.standard_normal((*shape, 2)) / np.sqrt(2)
    return pairs[..., 0] + 1j * pairs[..., 1]


def sample_channel(sampler, rng, count=None):
    """
    Draw channel realizations h = factor @ z

    Args:
        sampler (ChannelSampler): Factorized correlation matrix
        rng (numpy.random.Generator): Random stream
        count (int, optional): Number of realizations; columns of the result

    Returns:
        numpy.ndarray: N-vector, or N x count matrix when count is given
    """
    if count is None:
        return sampler.factor @ complex_normal(rng, (sampler.rank,))
    # One realization per row of draws keeps prefixes stable across counts
    return sampler.factor @ complex_normal(rng, (count, sampler.rank)).T


def observe_pilot(h, pilot, rng):
    """
    Received pilot observation y = tau_p sqrt(rho) h + w with w ~ CN(0, tau_p sigma2 I)

    Args:
        h (numpy.ndarray): Channel vector, or N x T matrix of channels
        pilot (PilotConfig): Pilot parameters
        rng (numpy.random.Generator): Noise stream

    Returns:
        numpy.ndarray: Observation of the same shape as h
    """
    h = np.asarray(h, dtype=complex)
    y = pilot.scale * h
    if pilot.sigma2 > 0:
        y = y + np.sqrt(pilot.tau_p * pilot.sigma2) * complex_normal(rng, h.shape[::-1]).T
    return y


def q_matrix(R, gamma):
    """
    Normalized observation correlation Q = R + I / gamma

    Args:
        R (CorrelationMatrix or numpy.ndarray): Channel correlation
        gamma (float): Transmit SNR, may be inf

    Returns:
        numpy.ndarray: Hermitian N x N matrix
    """
    if not gamma > 0:
        raise InvalidInputError(f"gamma must be positive, got {gamma}")
    entries = R.entries if isinstance(R, CorrelationMatrix) else np.asarray(R, dtype=complex)
    return entries + np.eye(entries.shape[0]) / gamma
