"""Shared fixtures: reference geometries, pilots and random Hermitian matrices."""

import numpy as np
import pytest

from channel.geometry import ArrayGeometry
from channel.sampler import PilotConfig
from utils.config_loader import ScenarioConfig
from utils.constants import DELTA_H, DELTA_V, NOISE_DBM, RHO_DBM, TAU_P, WAVELENGTH


def make_geometry(n_h, n_v):
    """UPA with the reference quarter-wavelength spacing at 3 GHz."""
    return ArrayGeometry(n_h, n_v, DELTA_H, DELTA_V, WAVELENGTH)


def random_psd(rng, n, rank=None):
    """Random Hermitian PSD matrix with unit average diagonal."""
    rank = n if rank is None else rank
    b = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return (b @ b.conj().T) / (2 * rank)


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def geometry_8x8():
    return make_geometry(8, 8)


@pytest.fixture
def geometry_16x16():
    return make_geometry(16, 16)


@pytest.fixture
def unit_pilot():
    """tau_p = 1, rho = 1, gamma = 10 (10 dB)."""
    return PilotConfig(1, 1.0, 0.1)


@pytest.fixture
def table_pilot():
    """Reference pilot: tau_p = 10, rho = 20 dBm, noise = -87 dBm."""
    return PilotConfig.from_dbm(TAU_P, RHO_DBM, NOISE_DBM)


@pytest.fixture
def default_config():
    return ScenarioConfig.load()
