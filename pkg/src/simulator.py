"""
Simulator - Runs one experiment subcommand and writes its tables
"""
import logging
import os
from enum import Enum, auto

from experiments.complexity import exp_complexity
from experiments.nmse import exp_nmse_cdf, exp_nmse_vs_m, exp_nmse_vs_n, exp_nmse_vs_spread
from experiments.nsae import exp_nsae
from experiments.se import exp_se
from managers.sweep_manager import SweepManager
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


class ExperimentKind(Enum):
    """Experiment enumeration"""
    NSAE = auto()
    NMSE_VS_N = auto()
    NMSE_VS_SPREAD = auto()
    NMSE_CDF = auto()
    NMSE_VS_M = auto()
    SE = auto()
    COMPLEXITY = auto()

    @property
    def command(self):
        return self.name.lower().replace("_", "-")

    @classmethod
    def from_command(cls, command):
        for kind in cls:
            if kind.command == command:
                return kind
        raise InvalidInputError(f"unknown experiment {command!r}")


def details_path(out):
    """Path of the per-drop detail table written next to the aggregate one"""
    root, extension = os.path.splitext(out)
    return f"{root}_details{extension or '.csv'}"


class Simulator:
    """Holds the scenario and the worker pool, and dispatches experiments"""

    def __init__(self, config, seed=None, full=False, show_progress=True, n_jobs=None):
        """
        Initialize the simulator

        Args:
            config (ScenarioConfig): Validated scenario
            seed (int, optional): Root seed overriding the config
            full (bool): Lift the desk-scale caps
            show_progress (bool): Show progress bars
            n_jobs (int, optional): Worker count; read from the environment when omitted
        """
        self.config = config
        self.seed = config.experiment.seed if seed is None else seed
        self.full = full
        self.sweep_manager = SweepManager(n_jobs, show_progress)

    def run_experiment(self, kind, array="upa", se_sweep="m"):
        """
        Run one experiment

        Args:
            kind (ExperimentKind): Experiment to run
            array (str): Array family of the NMSE-vs-N sweep
            se_sweep (str): Swept parameter of the SE experiment

        Returns:
            list: ResultsManager tables; the first is the main one
        """
        common = dict(seed=self.seed, full=self.full, sweep_manager=self.sweep_manager)
        logger.info("running %s (seed %d%s)", kind.command, self.seed, ", full grid" if self.full else "")

        if kind is ExperimentKind.NSAE:
            return [exp_nsae(self.config, **common)]
        if kind is ExperimentKind.NMSE_VS_N:
            return [exp_nmse_vs_n(self.config, array, **common)]
        if kind is ExperimentKind.NMSE_VS_SPREAD:
            return [exp_nmse_vs_spread(self.config, **common)]
        if kind is ExperimentKind.NMSE_CDF:
            return [exp_nmse_cdf(self.config, **common)]
        if kind is ExperimentKind.NMSE_VS_M:
            return [exp_nmse_vs_m(self.config, **common)]
        if kind is ExperimentKind.SE:
            return list(exp_se(self.config, se_sweep, **common))
        return [exp_complexity(self.config, **common)]

    def run(self, kind, out=None, array="upa", se_sweep="m"):
        """
        Run one experiment and write its tables

        The main table goes to out (stdout when omitted); a detail table is
        written next to it and skipped when writing to stdout.

        Returns:
            list: The written ResultsManager tables
        """
        tables = self.run_experiment(kind, array, se_sweep)
        tables[0].write(out)
        for table in tables[1:]:
            if out is None:
                logger.info("skipping the %s table; pass --out to keep it", table.experiment)
                continue
            table.write(details_path(out))
        return tables
