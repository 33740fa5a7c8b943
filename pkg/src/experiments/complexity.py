"""
Complexity - Per-phase operation counts across array shapes of fixed size
"""
import logging

from complexity.model import crossover_report
from managers.results_manager import ResultsManager

logger = logging.getLogger(__name__)

COLUMNS = ["scheme", "n_h", "n_v", "M", "phase", "theoretical_count", "measured_multiplies", "measured_adds", "modeled"]


def exp_complexity(config, seed=None, full=False, sweep_manager=None):
    """
    Operation counts of MMSE, KBA, NKP, KBA/DFT and DFT for every power-of-two
    shape of the configured N

    Returns:
        ResultsManager: Rows as produced by crossover_report
    """
    n = config.experiment.complexity_n
    logger.info("complexity counts for N = %d", n)
    table = ResultsManager("complexity", COLUMNS)
    for row in crossover_report(n, m_obs=config.experiment.m_observations):
        table.addRow(**row)
    return table
