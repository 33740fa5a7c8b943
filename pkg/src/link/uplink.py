"""
Uplink - Use-and-then-forget SINR/SE and the multi-UE Monte Carlo experiment
"""
import logging
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from channel.correlation import synthesize_correlation
from channel.sampler import channel_factor, observe_pilot, sample_channel
from estimators.estimator import EstimatorKind
from estimators.factory import build_estimator
from learning.covariance import CovarianceMethod, estimate_covariance
from link.combining import Combiner, combine
from managers.rng_manager import RngManager
from managers.sweep_manager import SweepManager
from managers.ue_manager import UeManager
from utils.constants import DEFAULT_ETA, DEFAULT_M_OBSERVATIONS
from utils.errors import InsufficientSamplesError, InvalidInputError

logger = logging.getLogger(__name__)

PERFECT = "perfect"


@dataclass(frozen=True)
class EstimatorPolicy:
    """Estimator kind plus where its correlation matrix comes from"""

    estimator: EstimatorKind
    covariance: str = PERFECT
    eta: float = None
    m_observations: int = DEFAULT_M_OBSERVATIONS

    def __post_init__(self):
        if self.covariance != PERFECT:
            CovarianceMethod(self.covariance)
        if self.m_observations < 1:
            raise InvalidInputError("m_observations must be positive")

    @classmethod
    def parse(cls, text, eta=None, m_observations=DEFAULT_M_OBSERVATIONS):
        """
        Parse "estimator:covariance", e.g. "kba:structured" or "mmse:perfect"

        Args:
            text (str): Policy string; the covariance part defaults to perfect
            eta (float, optional): Shrinkage for regularized (defaults to DEFAULT_ETA) or structured (none by default)
            m_observations (int): Observations used for covariance learning

        Returns:
            EstimatorPolicy: Parsed policy
        """
        estimator, _, covariance = str(text).partition(":")
        covariance = (covariance or PERFECT).lower()
        if covariance != PERFECT and covariance not in {m.value for m in CovarianceMethod}:
            raise InvalidInputError(f"unknown covariance policy {covariance!r} in {text!r}")
        if covariance == CovarianceMethod.REGULARIZED.value and eta is None:
            eta = DEFAULT_ETA
        if covariance in (PERFECT, CovarianceMethod.SAMPLE.value):
            eta = None
        return cls(EstimatorKind.from_name(estimator), covariance, eta, int(m_observations))

    @property
    def perfect(self):
        return self.covariance == PERFECT

    @property
    def label(self):
        return f"{self.estimator.value}:{self.covariance}"


@dataclass(frozen=True)
class UplinkScenario:
    """Everything one SE Monte Carlo run needs"""

    geometry: object
    simulation: object
    pilot: object
    k_ues: int
    tau_c: int
    bs_height: float
    combiner: Combiner = Combiner.RZF
    policy: EstimatorPolicy = field(default_factory=lambda: EstimatorPolicy(EstimatorKind.MMSE))
    num_ue_drops: int = 1
    num_blocks_per_drop: int = 1
    ue_profiles: tuple = None

    def __post_init__(self):
        if self.pilot.tau_p > self.tau_c:
            raise InvalidInputError(f"tau_p = {self.pilot.tau_p} exceeds tau_c = {self.tau_c}")
        if not 1 <= self.k_ues <= self.pilot.tau_p:
            raise InvalidInputError(f"orthogonal pilots need 1 <= K <= tau_p, got K = {self.k_ues}")
        if self.num_ue_drops < 1 or self.num_blocks_per_drop < 1:
            raise InvalidInputError("Monte Carlo sizes must be positive")
        if self.ue_profiles is not None:
            if len(self.ue_profiles) != self.k_ues:
                raise InvalidInputError("ue_profiles must hold one placement per UE")
            for placement in self.ue_profiles:
                if not self.simulation.d_min <= placement.distance <= self.simulation.d_max:
                    raise InvalidInputError(f"UE distance {placement.distance} outside [d_min, d_max]")


@dataclass(frozen=True, eq=False)
class UatfStatistics:
    """
    Monte Carlo means over coherence blocks.

    signal[k] = E[v_k^H h_k], cross[k, i] = E|v_k^H h_i|^2, norm[k] = E||v_k||^2.
    """

    signal: np.ndarray
    cross: np.ndarray
    norm: np.ndarray
    blocks: int

    def merge(self, other):
        """Pool two sets of block statistics"""
        total = self.blocks + other.blocks
        a, b = self.blocks / total, other.blocks / total
        return UatfStatistics(a * self.signal + b * other.signal, a * self.cross + b * other.cross,
                              a * self.norm + b * other.norm, total)


@dataclass(frozen=True, eq=False)
class UatfTerms:
    """Numerator, interference and noise of the per-UE SINR"""

    numerator: np.ndarray
    interference: np.ndarray
    noise: np.ndarray

    @property
    def sinr(self):
        return self.numerator / (self.interference + self.noise)


@dataclass(frozen=True, eq=False)
class SeResult:
    """Per-UE and sum SE averaged over UE drops"""

    per_ue_se: np.ndarray
    sum_se: float
    sinr_terms: list
    drop_sum_se: np.ndarray

    @property
    def sum_se_stderr(self):
        if self.drop_sum_se.size < 2:
            return 0.0
        return float(self.drop_sum_se.std(ddof=1) / np.sqrt(self.drop_sum_se.size))


def accumulate_uatf_statistics(V, H):
    """
    Block averages needed by the UatF bound

    Args:
        V (numpy.ndarray): T x N x K combiners
        H (numpy.ndarray): T x N x K true channels

    Returns:
        UatfStatistics: Means over the T blocks
    """
    V = np.asarray(V, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if V.ndim == 2:
        V, H = V[None], H[None]
    if V.shape != H.shape:
        raise InvalidInputError(f"combiner shape {V.shape} does not match channel shape {H.shape}")

    inner = np.einsum("tnk,tni->tki", V.conj(), H)
    k = np.arange(V.shape[2])
    return UatfStatistics(
        signal=inner[:, k, k].mean(axis=0),
        cross=np.mean(np.abs(inner) ** 2, axis=0),
        norm=np.mean(np.sum(np.abs(V) ** 2, axis=1), axis=0),
        blocks=V.shape[0],
    )


def uatf_terms(stats, noise_over_power):
    """
    Split the UatF SINR into its numerator, interference and noise terms

    Raises:
        InsufficientSamplesError: Some denominator is not positive
    """
    numerator = np.abs(stats.signal) ** 2
    interference = stats.cross.sum(axis=1) - numerator
    noise = noise_over_power * stats.norm
    denominator = interference + noise
    if np.any(denominator <= 0):
        raise InsufficientSamplesError(
            "UatF denominator is not positive; use more blocks per drop or a nonzero noise level")
    return UatfTerms(numerator, interference, noise)


def uatf_sinr(stats, noise_over_power):
    """
    Use-and-then-forget SINR per UE

    |E[v_k^H h_k]|^2 / (sum_i E|v_k^H h_i|^2 - |E[v_k^H h_k]|^2 + (sigma2 / rho) E||v_k||^2)

    Args:
        stats (UatfStatistics): Block averages
        noise_over_power (float): sigma2 / rho

    Returns:
        numpy.ndarray: SINR per UE
    """
    return uatf_terms(stats, noise_over_power).sinr


def uatf_se(sinr, tau_p, tau_c):
    """
    SE lower bound (1 - tau_p / tau_c) log2(1 + sinr)

    Args:
        sinr (float or numpy.ndarray): UatF SINR
        tau_p (int): Pilot length
        tau_c (int): Coherence block length

    Returns:
        float or numpy.ndarray: bit/s/Hz
    """
    if tau_p > tau_c:
        raise InvalidInputError(f"tau_p = {tau_p} exceeds tau_c = {tau_c}")
    return (1.0 - tau_p / tau_c) * np.log2(1.0 + np.asarray(sinr, dtype=float))


def policy_estimator(policy, R, placement, geometry, pilot, sampler, rng_manager, drop_index, ue):
    """
    Build a UE's estimator, learning its correlation first unless the policy is perfect

    Learning observations come from streams keyed by (drop, UE) only, so every
    policy and every M sees the same draws (a smaller M uses a prefix).
    """
    if policy.perfect:
        return build_estimator(policy.estimator, R, pilot, geometry, placement.profile)

    m = policy.m_observations
    h = sample_channel(sampler, rng_manager.stream("learn_channel", drop_index, ue), m)
    y = observe_pilot(h, pilot, rng_manager.stream("learn_noise", drop_index, ue))
    estimate = estimate_covariance(y, pilot, geometry.n_h, geometry.n_v, policy.covariance, policy.eta)
    return build_estimator(policy.estimator, estimate.r_hat, pilot, geometry, placement.profile)


def simulate_drop(drop_index, geometry, pilot, policies, combiners, num_blocks, rng_manager, placements):
    """
    One UE drop for several policies and combiners on common channel draws

    Returns:
        dict: (policy label, combiner value) -> UatfTerms
    """
    correlations = [synthesize_correlation(geometry, placement.profile) for placement in placements]
    samplers = [channel_factor(R) for R in correlations]

    # N x T x K channels and pilot observations, shared by every policy
    H = np.stack([sample_channel(sampler, rng_manager.stream("channel", drop_index, ue), num_blocks)
                  for ue, sampler in enumerate(samplers)], axis=-1)
    Y = observe_pilot(H, pilot, rng_manager.stream("noise", drop_index))
    H_blocks = H.transpose(1, 0, 2)

    outcomes = {}
    for policy in policies:
        estimates = []
        for ue, placement in enumerate(placements):
            estimator = policy_estimator(policy, correlations[ue], placement, geometry, pilot,
                                         samplers[ue], rng_manager, drop_index, ue)
            estimates.append(estimator.apply(Y[:, :, ue]))
        H_hat = np.stack(estimates, axis=-1).transpose(1, 0, 2)

        for combiner in combiners:
            V = combine(combiner, H_hat, pilot.noise_over_power)
            stats = accumulate_uatf_statistics(V, H_blocks)
            outcomes[(policy.label, Combiner(combiner).value)] = uatf_terms(stats, pilot.noise_over_power)
    return outcomes


def _drop_job(drop_index, geometry, pilot, policies, combiners, num_blocks, seed, ue_manager, k_ues, fixed):
    rng_manager = RngManager(seed)
    placements = list(fixed) if fixed is not None else ue_manager.drop(drop_index, k_ues)
    return simulate_drop(drop_index, geometry, pilot, policies, combiners, num_blocks, rng_manager, placements)


def run_uplink_sweep(scenario, policies, combiners, seed, sweep_manager=None):
    """
    SE of several policies and combiners over the scenario's UE drops

    Args:
        scenario (UplinkScenario): Geometry, pilot, UE law and Monte Carlo sizes
        policies (list): EstimatorPolicy entries
        combiners (list): Combiner entries
        seed (int): Root seed
        sweep_manager (SweepManager, optional): Worker pool for the drops

    Returns:
        dict: (policy label, combiner value) -> SeResult
    """
    sweep_manager = sweep_manager or SweepManager(showProgress=False)
    ue_manager = UeManager(scenario.simulation, scenario.bs_height, RngManager(seed))
    job = partial(_drop_job, geometry=scenario.geometry, pilot=scenario.pilot, policies=list(policies),
                  combiners=[Combiner(c) for c in combiners], num_blocks=scenario.num_blocks_per_drop,
                  seed=seed, ue_manager=ue_manager, k_ues=scenario.k_ues, fixed=scenario.ue_profiles)
    drops = sweep_manager.run(job, range(scenario.num_ue_drops), description="UE drops")

    results = {}
    for key in drops[0]:
        terms = [drop[key] for drop in drops]
        per_drop = np.array([uatf_se(t.sinr, scenario.pilot.tau_p, scenario.tau_c) for t in terms])
        per_ue = per_drop.mean(axis=0)
        results[key] = SeResult(per_ue, float(per_ue.sum()), terms, per_drop.sum(axis=1))
        logger.debug("%s/%s: sum SE %.3f bit/s/Hz", key[0], key[1], results[key].sum_se)
    return results


def run_uplink_experiment(scenario, seed, sweep_manager=None):
    """
    SE of the scenario's own policy and combiner

    Args:
        scenario (UplinkScenario): Full scenario
        seed (int): Root seed
        sweep_manager (SweepManager, optional): Worker pool for the drops

    Returns:
        SeResult: Per-UE and sum SE
    """
    results = run_uplink_sweep(scenario, [scenario.policy], [scenario.combiner], seed, sweep_manager)
    return results[(scenario.policy.label, scenario.combiner.value)]
