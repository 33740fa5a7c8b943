"""
NMSE - Estimation accuracy sweeps over array size, angular spread and learned statistics
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import partial

from channel.sampler import channel_factor
from estimators.estimator import EstimatorKind
from experiments.common import (aggregate, estimator_nmse, learned_nmse, learning_observations,
                                position_correlation, sweep_shape, sweep_sizes)
from learning.covariance import CovarianceMethod, estimate_covariance
from link.uplink import PERFECT
from managers.results_manager import ResultsManager
from managers.rng_manager import RngManager
from managers.sweep_manager import SweepManager
from managers.ue_manager import UeManager

logger = logging.getLogger(__name__)

MMSE = EstimatorKind.MMSE.value
KBA = EstimatorKind.KBA.value
STRUCTURED = CovarianceMethod.STRUCTURED.value

NMSE_COLUMNS = ["nmse_mean", "nmse_stderr", "gap_to_mmse", "gap_stderr"]


@dataclass(frozen=True)
class PositionJob:
    """One random UE position of an NMSE sweep"""

    index: int
    n_h: int
    n_v: int
    spread_elevation_deg: float = None


def _placement(job, config, seed):
    ue_manager = UeManager(config.simulation, config.geometry.bs_height, RngManager(seed))
    return ue_manager.position(job.index, job.spread_elevation_deg)


def _position_nmse(job, config, kinds, seed):
    geometry = config.geometry.geometry(job.n_h, job.n_v)
    placement = _placement(job, config, seed)
    R = position_correlation(placement, geometry)
    return estimator_nmse(kinds, R, placement, geometry, config.simulation.pilot())


def _nmse_values(pooled):
    mean, stderr, gap, gap_stderr = pooled
    return dict(zip(NMSE_COLUMNS, (mean, stderr, gap, gap_stderr)))


def _group(jobs, results, key):
    groups = defaultdict(list)
    for job, result in zip(jobs, results):
        groups[key(job)].append(result)
    return groups


def exp_nmse_vs_n(config, array="upa", seed=None, full=False, sweep_manager=None):
    """
    NMSE versus the number of antennas, averaged over random UE positions

    Square UPAs for array="upa", horizontal ULAs for array="ula". Positions
    are shared by every size.

    Args:
        config (ScenarioConfig): Scenario
        array (str): "upa" or "ula"
        seed (int, optional): Root seed; the config seed when omitted
        full (bool): Use the full size grid
        sweep_manager (SweepManager, optional): Worker pool

    Returns:
        ResultsManager: Rows (array, N, n_h, n_v, estimator, nmse_mean, nmse_stderr, gap_to_mmse, gap_stderr)
    """
    seed = config.experiment.seed if seed is None else seed
    sweep_manager = sweep_manager or SweepManager()
    kinds = list(config.experiment.upa_estimators if array == "upa" else config.experiment.ula_estimators)
    positions = config.simulation.num_ue_positions

    jobs = [PositionJob(p, *sweep_shape(n, array)) for n in sweep_sizes(config, array, full) for p in range(positions)]
    logger.info("NMSE vs N (%s): %d sizes x %d positions", array, len(jobs) // positions, positions)
    results = sweep_manager.run(partial(_position_nmse, config=config, kinds=kinds, seed=seed), jobs, "positions")

    table = ResultsManager(f"nmse-vs-n-{array}", ["array", "N", "n_h", "n_v", "estimator"] + NMSE_COLUMNS)
    for (n_h, n_v), samples in _group(jobs, results, lambda job: (job.n_h, job.n_v)).items():
        pooled = aggregate(samples, MMSE if MMSE in kinds else None)
        for kind in kinds:
            table.addRow(array=array, N=n_h * n_v, n_h=n_h, n_v=n_v, estimator=kind, **_nmse_values(pooled[kind]))
    table.sortRows("N", "estimator")
    return table


def exp_nmse_vs_spread(config, seed=None, full=False, sweep_manager=None):
    """
    NMSE versus the elevation spread at the configured UPA size

    Returns:
        ResultsManager: Rows (sigma_theta_deg, estimator, nmse_mean, nmse_stderr, gap_to_mmse, gap_stderr)
    """
    seed = config.experiment.seed if seed is None else seed
    sweep_manager = sweep_manager or SweepManager()
    kinds = list(config.experiment.upa_estimators)
    n_h, n_v = config.geometry.n_h, config.geometry.n_v

    jobs = [PositionJob(p, n_h, n_v, sigma) for sigma in config.experiment.sigma_theta_deg
            for p in range(config.simulation.num_ue_positions)]
    results = sweep_manager.run(partial(_position_nmse, config=config, kinds=kinds, seed=seed), jobs, "positions")

    table = ResultsManager("nmse-vs-spread", ["sigma_theta_deg", "estimator"] + NMSE_COLUMNS)
    for sigma, samples in _group(jobs, results, lambda job: job.spread_elevation_deg).items():
        pooled = aggregate(samples, MMSE if MMSE in kinds else None)
        for kind in kinds:
            table.addRow(sigma_theta_deg=sigma, estimator=kind, **_nmse_values(pooled[kind]))
    table.sortRows("sigma_theta_deg", "estimator")
    return table


def _position_cdf(job, config, m_observations, etas, seed):
    geometry = config.geometry.geometry(job.n_h, job.n_v)
    pilot = config.simulation.pilot()
    placement = _placement(job, config, seed)
    R = position_correlation(placement, geometry)
    y = learning_observations(channel_factor(R), pilot, RngManager(seed), job.index, m_observations)

    def learned(kind, method, eta=None):
        estimate = estimate_covariance(y, pilot, job.n_h, job.n_v, method, eta)
        return learned_nmse(kind, estimate.r_hat, R, placement, geometry, pilot)

    rows = [
        (MMSE, PERFECT, "", estimator_nmse([MMSE], R, placement, geometry, pilot)[MMSE]),
        (KBA, STRUCTURED, "", learned(KBA, STRUCTURED)),
    ]
    for eta in etas:
        for method in (CovarianceMethod.REGULARIZED, CovarianceMethod.STRUCTURED):
            rows.append((MMSE, method.value, eta, learned(MMSE, method, eta)))
    return rows


def exp_nmse_cdf(config, seed=None, full=False, sweep_manager=None):
    """
    Per-position NMSE with learned statistics, for an empirical CDF

    Compares MMSE with the true R, KBA on the structured estimate, and MMSE on
    the regularized and structured estimates for every eta of the sweep.

    Returns:
        ResultsManager: Rows (position, estimator, covariance, eta, M, nmse)
    """
    seed = config.experiment.seed if seed is None else seed
    sweep_manager = sweep_manager or SweepManager()
    m = config.experiment.m_observations
    n_h, n_v = config.geometry.n_h, config.geometry.n_v

    jobs = [PositionJob(p, n_h, n_v) for p in range(config.simulation.num_ue_positions)]
    job = partial(_position_cdf, config=config, m_observations=m, etas=list(config.experiment.eta_sweep), seed=seed)
    results = sweep_manager.run(job, jobs, "positions")

    table = ResultsManager("nmse-cdf", ["position", "estimator", "covariance", "eta", "M", "nmse"])
    for position, rows in zip(jobs, results):
        for estimator, covariance, eta, nmse in rows:
            table.addRow(position=position.index, estimator=estimator, covariance=covariance, eta=eta,
                         M="" if covariance == PERFECT else m, nmse=nmse)
    table.sortRows("estimator", "covariance", "eta", "position")
    return table


def _position_vs_m(job, config, m_sweep, seed):
    geometry = config.geometry.geometry(job.n_h, job.n_v)
    pilot = config.simulation.pilot()
    placement = _placement(job, config, seed)
    R = position_correlation(placement, geometry)
    y = learning_observations(channel_factor(R), pilot, RngManager(seed), job.index, max(m_sweep))

    results = {PERFECT: estimator_nmse([KBA], R, placement, geometry, pilot)[KBA]}
    for m in m_sweep:
        estimate = estimate_covariance(y[:, :m], pilot, job.n_h, job.n_v, STRUCTURED)
        results[m] = learned_nmse(KBA, estimate.r_hat, R, placement, geometry, pilot)
    return results


def exp_nmse_vs_m(config, seed=None, full=False, sweep_manager=None):
    """
    KBA NMSE on the structured estimate versus the number of observations,
    with the perfect-statistics KBA value as reference rows

    Each position draws its observations once; a smaller M uses a prefix.

    Returns:
        ResultsManager: Rows (N, n_h, n_v, estimator, covariance, M, nmse_mean, nmse_stderr, gap_to_perfect, gap_stderr)
    """
    seed = config.experiment.seed if seed is None else seed
    sweep_manager = sweep_manager or SweepManager()
    m_sweep = sorted(int(m) for m in config.experiment.m_sweep)
    n_h, n_v = config.geometry.n_h, config.geometry.n_v

    jobs = [PositionJob(p, n_h, n_v) for p in range(config.simulation.num_ue_positions)]
    results = sweep_manager.run(partial(_position_vs_m, config=config, m_sweep=m_sweep, seed=seed), jobs, "positions")
    pooled = aggregate(results, PERFECT)

    columns = ["N", "n_h", "n_v", "estimator", "covariance", "M", "nmse_mean", "nmse_stderr", "gap_to_perfect", "gap_stderr"]
    table = ResultsManager("nmse-vs-m", columns)
    for key, (mean, stderr, gap, gap_stderr) in pooled.items():
        table.addRow(N=n_h * n_v, n_h=n_h, n_v=n_v, estimator=KBA, covariance=PERFECT if key == PERFECT else STRUCTURED,
                     M="" if key == PERFECT else key, nmse_mean=mean, nmse_stderr=stderr,
                     gap_to_perfect=gap, gap_stderr=gap_stderr)
    table.sortRows("covariance", "M")
    return table
