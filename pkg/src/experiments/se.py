"""
SE - Uplink sum spectral efficiency sweeps over the observation length and the transmit power
"""
import logging

from experiments.common import se_k_ues
from learning.covariance import CovarianceMethod
from link.uplink import EstimatorPolicy, UplinkScenario, run_uplink_sweep, uatf_se
from managers.results_manager import ResultsManager
from managers.sweep_manager import SweepManager
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

SE_SWEEPS = ("m", "rho")

AGGREGATE_COLUMNS = ["sweep", "estimator", "combiner", "M", "rho_dbm", "sum_se_mean", "sum_se_stderr"]
DETAIL_COLUMNS = ["sweep", "drop", "ue", "estimator", "combiner", "M", "rho_dbm", "sinr", "se"]


def se_policies(config, m_observations):
    """
    Policies of the SE comparison at one observation length

    Only the regularized policies take the configured eta; structured
    estimates are used without shrinkage.
    """
    policies = []
    for text in config.experiment.se_policies:
        _, _, covariance = str(text).partition(":")
        eta = config.experiment.eta if covariance == CovarianceMethod.REGULARIZED.value else None
        policies.append(EstimatorPolicy.parse(text, eta, m_observations))
    return policies


def _scenario(config, pilot, full):
    s = config.simulation
    return UplinkScenario(
        geometry=config.geometry.geometry(),
        simulation=s,
        pilot=pilot,
        k_ues=se_k_ues(config, full),
        tau_c=s.tau_c,
        bs_height=config.geometry.bs_height,
        num_ue_drops=s.num_ue_drops,
        num_blocks_per_drop=s.num_blocks_per_drop,
    )


def _add_rows(aggregate, details, sweep, results, m_observations, rho_dbm, pilot, tau_c):
    for (label, combiner), result in results.items():
        aggregate.addRow(sweep=sweep, estimator=label, combiner=combiner, M=m_observations, rho_dbm=rho_dbm,
                         sum_se_mean=result.sum_se, sum_se_stderr=result.sum_se_stderr)
        for drop, terms in enumerate(result.sinr_terms):
            se = uatf_se(terms.sinr, pilot.tau_p, tau_c)
            for ue, (sinr, value) in enumerate(zip(terms.sinr, se)):
                details.addRow(sweep=sweep, drop=drop, ue=ue, estimator=label, combiner=combiner,
                               M=m_observations, rho_dbm=rho_dbm, sinr=float(sinr), se=float(value))


def exp_se(config, sweep="m", seed=None, full=False, sweep_manager=None):
    """
    Sum SE of every configured policy and combiner

    The "m" sweep varies the observation length used for covariance
    learning at the configured transmit power; the "rho" sweep varies the
    transmit power at the configured observation length. UE drops and
    channel draws are shared by every policy and grid point.

    Args:
        config (ScenarioConfig): Scenario
        sweep (str): "m" or "rho"
        seed (int, optional): Root seed; the config seed when omitted
        full (bool): Use K from the simulation section instead of the desk-scale K
        sweep_manager (SweepManager, optional): Worker pool for the drops

    Returns:
        tuple: (aggregate ResultsManager, per-drop detail ResultsManager)
    """
    if sweep not in SE_SWEEPS:
        raise InvalidInputError(f"unknown SE sweep {sweep!r}; expected one of {', '.join(SE_SWEEPS)}")
    seed = config.experiment.seed if seed is None else seed
    sweep_manager = sweep_manager or SweepManager()
    e = config.experiment

    if sweep == "m":
        grid = [(int(m), config.simulation.rho_dbm) for m in e.se_m_sweep]
    else:
        grid = [(e.m_observations, float(rho)) for rho in e.rho_sweep_dbm]

    aggregate = ResultsManager(f"se-{sweep}", AGGREGATE_COLUMNS)
    details = ResultsManager(f"se-{sweep}-details", DETAIL_COLUMNS)
    for m_observations, rho_dbm in grid:
        pilot = config.simulation.pilot(rho_dbm)
        scenario = _scenario(config, pilot, full)
        logger.info("SE sweep %s: M = %d, rho = %.1f dBm, %d drops", sweep, m_observations, rho_dbm,
                    scenario.num_ue_drops)
        results = run_uplink_sweep(scenario, se_policies(config, m_observations), e.combiners, seed, sweep_manager)
        _add_rows(aggregate, details, sweep, results, m_observations, rho_dbm, pilot, scenario.tau_c)

    aggregate.sortRows("combiner", "estimator", "M", "rho_dbm")
    details.sortRows("combiner", "estimator", "M", "rho_dbm", "drop", "ue")
    return aggregate, details
