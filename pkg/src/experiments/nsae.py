"""
NSAE - Kronecker and circulant approximation errors versus the elevation spread
"""
import logging
from dataclasses import dataclass
from functools import partial

from channel.approximation import kba_dft_factors, kba_factors, nkp_factors, nsae_a, nsae_r
from channel.correlation import ScatteringProfile, synthesize_correlation
from channel.sampler import PilotConfig
from estimators.factory import build_kba, build_kba_dft, build_mmse, build_nkp_estimator
from managers.results_manager import ResultsManager
from managers.sweep_manager import SweepManager
from utils.units import db_to_linear

logger = logging.getLogger(__name__)

# Factor extraction and estimator per reported method
METHODS = {
    "kba": (kba_factors, build_kba),
    "nkp": (nkp_factors, build_nkp_estimator),
    "kba_dft": (kba_dft_factors, build_kba_dft),
}


@dataclass(frozen=True)
class NsaeJob:
    """One (shape, nominal elevation, elevation spread) point"""

    n_h: int
    n_v: int
    mean_elevation_deg: float
    sigma_theta_deg: float


def nsae_pilot(gamma_db):
    """Unit-power pilot whose transmit SNR is gamma_db"""
    return PilotConfig(1, 1.0, 1.0 / db_to_linear(gamma_db))


def _nsae_point(job, config):
    e = config.experiment
    geometry = config.geometry.geometry(job.n_h, job.n_v)
    profile = ScatteringProfile.from_degrees(0.0, job.mean_elevation_deg, e.nsae_spread_azimuth_deg,
                                             job.sigma_theta_deg)
    R = synthesize_correlation(geometry, profile)
    pilot = nsae_pilot(e.nsae_gamma_db)
    A_mmse = build_mmse(R.entries, pilot).materialize()

    rows = []
    for method, (extract, build) in METHODS.items():
        factors = extract(R, job.n_h, job.n_v)
        A = build(factors, pilot).materialize()
        rows.append((method, nsae_r(R, factors), nsae_a(A_mmse, A)))
    return rows


def exp_nsae(config, seed=None, full=False, sweep_manager=None):
    """
    NSAE of the correlation matrix and of the estimator matrix for KBA, NKP
    and the combined KBA/DFT approximation

    The nominal azimuth is 0 and the gain is 1. The nominal elevation sweep
    applies to square shapes only; other shapes use 0.

    Args:
        config (ScenarioConfig): Scenario
        seed (int, optional): Unused; the sweep is deterministic
        full (bool): Unused
        sweep_manager (SweepManager, optional): Worker pool

    Returns:
        ResultsManager: Rows (n_h, n_v, mean_elevation_deg, sigma_theta_deg, method, nsae_r, nsae_a)
    """
    e = config.experiment
    sweep_manager = sweep_manager or SweepManager()
    jobs = []
    for n_h, n_v in e.nsae_shapes:
        elevations = e.mean_elevation_deg if n_h == n_v else [0.0]
        jobs += [NsaeJob(int(n_h), int(n_v), float(theta), float(sigma))
                 for theta in elevations for sigma in e.sigma_theta_deg]
    logger.info("NSAE sweep: %d points", len(jobs))
    results = sweep_manager.run(partial(_nsae_point, config=config), jobs, "NSAE points")

    table = ResultsManager("nsae", ["n_h", "n_v", "mean_elevation_deg", "sigma_theta_deg", "method", "nsae_r", "nsae_a"])
    for job, rows in zip(jobs, results):
        for method, error_r, error_a in rows:
            table.addRow(n_h=job.n_h, n_v=job.n_v, mean_elevation_deg=job.mean_elevation_deg,
                         sigma_theta_deg=job.sigma_theta_deg, method=method, nsae_r=error_r, nsae_a=error_a)
    table.sortRows("n_h", "n_v", "mean_elevation_deg", "sigma_theta_deg", "method")
    return table
