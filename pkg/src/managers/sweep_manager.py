"""
Sweep Manager - Runs independent grid points and UE drops, optionally in parallel
"""
import logging
import os

from joblib import Parallel, delayed
from tqdm import tqdm

from utils.constants import THREADS_ENV_VAR
from utils.errors import ConfigError

logger = logging.getLogger(__name__)


def worker_count():
    """
    Worker count from the environment, 1 when unset

    Returns:
        int: Number of joblib workers
    """
    value = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not value:
        return 1
    try:
        count = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {value!r}") from None
    if count < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be at least 1, got {count}")
    return count


class SweepManager:
    """Maps a job function over a list of job descriptors; results keep submission order"""

    def __init__(self, nJobs=None, showProgress=True):
        """
        Initialize the sweep manager

        Args:
            nJobs (int, optional): Worker count; read from the environment when omitted
            showProgress (bool): Show a progress bar for sequential runs
        """
        self.nJobs = worker_count() if nJobs is None else nJobs
        self.showProgress = showProgress

    def run(self, function, jobs, description=None):
        """
        Evaluate function(job) for every job

        Each job must carry everything it needs, its random streams included,
        so the results do not depend on the worker count.

        Args:
            function (callable): Picklable function of one job descriptor
            jobs (list): Job descriptors
            description (str, optional): Progress bar label

        Returns:
            list: One result per job, in job order
        """
        jobs = list(jobs)
        logger.debug("running %d jobs of %s on %d worker(s)", len(jobs), description or function.__name__, self.nJobs)
        if self.nJobs == 1:
            iterator = tqdm(jobs, desc=description, disable=not self.showProgress, leave=False)
            return [function(job) for job in iterator]
        return Parallel(n_jobs=self.nJobs)(delayed(function)(job) for job in jobs)
