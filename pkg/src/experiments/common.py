"""
Common - Helpers shared by the experiment subcommands
"""
from math import isqrt

from channel.correlation import synthesize_correlation
from channel.sampler import observe_pilot, sample_channel
from estimators.factory import build_estimator
from estimators.nmse import analytic_nmse
from managers.results_manager import mean_and_stderr
from utils.constants import SWEEPS
from utils.errors import InvalidInputError


def sweep_sizes(config, array, full=False):
    """
    Array sizes of an N sweep

    Args:
        config (ScenarioConfig): Scenario
        array (str): "upa" or "ula"
        full (bool): Use the full grid instead of the configured desk-scale one

    Returns:
        list: Antenna counts
    """
    if full:
        return list(SWEEPS[f"{array}_sizes_full"])
    return list(getattr(config.experiment, f"{array}_sizes"))


def sweep_shape(n, array):
    """(n_h, n_v) of a square UPA or a horizontal ULA with n antennas"""
    if array == "ula":
        return n, 1
    side = isqrt(n)
    if side * side != n:
        raise InvalidInputError(f"a square UPA needs a perfect-square N, got {n}")
    return side, side


def se_k_ues(config, full=False):
    return config.simulation.k_ues if full else config.experiment.se_k_ues


def position_correlation(placement, geometry):
    return synthesize_correlation(geometry, placement.profile)


def estimator_nmse(kinds, R, placement, geometry, pilot):
    """
    Analytic NMSE of several estimators built on the true correlation

    Returns:
        dict: Estimator name -> NMSE
    """
    results = {}
    for kind in kinds:
        estimator = build_estimator(kind, R, pilot, geometry, placement.profile)
        results[kind] = analytic_nmse(estimator.materialize(), R, pilot)
    return results


def learned_nmse(kind, r_hat, R, placement, geometry, pilot):
    """NMSE against the true R of an estimator built on a learned correlation"""
    estimator = build_estimator(kind, r_hat, pilot, geometry, placement.profile)
    return analytic_nmse(estimator.materialize(), R, pilot)


def learning_observations(sampler, pilot, rng_manager, index, m_observations):
    """
    N x M pilot observations for covariance learning

    The streams depend on the index only, so a smaller M sees a prefix of a
    larger one.
    """
    h = sample_channel(sampler, rng_manager.stream("learn_channel", index), m_observations)
    return observe_pilot(h, pilot, rng_manager.stream("learn_noise", index))


def aggregate(samples, reference=None):
    """
    Pool per-position results

    Args:
        samples (list): One dict per position, all with the same keys
        reference (hashable, optional): Key the paired gaps are taken against

    Returns:
        dict: Key -> (mean, stderr, gap mean, gap stderr); gaps are 0 without a reference
    """
    pooled = {}
    for key in samples[0]:
        values = [sample[key] for sample in samples]
        mean, stderr = mean_and_stderr(values)
        gap, gap_stderr = 0.0, 0.0
        if reference is not None:
            gap, gap_stderr = mean_and_stderr([sample[key] - sample[reference] for sample in samples])
        pooled[key] = (mean, stderr, gap, gap_stderr)
    return pooled
