"""
Model - Leading-order operation counts per estimation phase, and measured counts of the fast paths
"""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from channel.correlation import iso_correlation
from channel.geometry import ArrayGeometry
from channel.sampler import PilotConfig, complex_normal
from complexity.counter import FlopCounter
from estimators.estimator import EstimatorKind
from estimators.factory import build_estimator
from estimators.kronecker import kron_matvec
from learning.covariance import block_toeplitz_average, sample_covariance
from utils.constants import COMPLEXITY_MEASURE_LIMIT, DEFAULT_M_OBSERVATIONS, DELTA_H, DELTA_V, WAVELENGTH
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


class Phase(Enum):
    """Phases of channel estimation, in processing order"""
    BUILD_Q_HAT = "build_q_hat"
    BUILD_A = "build_a"
    APPLY_A = "apply_a"


@dataclass(frozen=True)
class PhaseCounts:
    """Leading-order operation counts of one scheme; None where a phase does not exist"""

    scheme: EstimatorKind
    build_q_hat: float
    build_a: float
    apply_a: float

    def count(self, phase):
        return getattr(self, Phase(phase).value)


@dataclass(frozen=True)
class Workload:
    """One instrumented run: which scheme, which array shape, which phase"""

    scheme: EstimatorKind
    n_h: int
    n_v: int
    phase: Phase = Phase.APPLY_A
    m_observations: int = DEFAULT_M_OBSERVATIONS
    seed: int = 0


def theoretical_counts(scheme, n_h, n_v, m_obs=DEFAULT_M_OBSERVATIONS):
    """
    Leading-order counts with unit constants

    Kronecker factorizations cost max(n_h, n_v)^3 plus the n_h + n_v diagonal
    updates. The MMSE build uses the block-Toeplitz inversion order
    N^2 min(n_h, n_v) plus the N-entry update of R_hat.

    Args:
        scheme (str or EstimatorKind): Estimator family
        n_h (int): Columns of the array
        n_v (int): Rows of the array
        m_obs (int): Observations used for the covariance estimate

    Returns:
        PhaseCounts: Counts per phase
    """
    scheme = EstimatorKind.from_name(scheme)
    if n_h < 1 or n_v < 1 or m_obs < 1:
        raise InvalidInputError("n_h, n_v and m_obs must be positive")
    n = n_h * n_v
    log_n = np.log2(n) if n > 1 else 1.0
    largest = max(n_h, n_v)
    sample = m_obs * n ** 2

    if scheme in (EstimatorKind.LS, EstimatorKind.LOS):
        return PhaseCounts(scheme, None, None, n)
    if scheme is EstimatorKind.ISO:
        return PhaseCounts(scheme, None, None, n ** 2)
    if scheme is EstimatorKind.MMSE:
        return PhaseCounts(scheme, sample, n ** 2 * min(n_h, n_v) + n, n ** 2)
    if scheme is EstimatorKind.KBA:
        return PhaseCounts(scheme, sample, largest ** 3 + n_h + n_v, (n_h + n_v) * n)
    if scheme is EstimatorKind.NKP:
        # One rearranged matvec pair per power iteration, then the same eigen-decompositions as KBA
        return PhaseCounts(scheme, sample, n ** 2 + largest ** 3, (n_h + n_v) * n)
    if scheme is EstimatorKind.DFT:
        return PhaseCounts(scheme, n ** 2, n * log_n, n * log_n)
    return PhaseCounts(scheme, sample, n_h * np.log2(max(n_h, 2)) + n_v * np.log2(max(n_v, 2)), n * log_n)


def _workload_estimator(workload, geometry, pilot):
    # Isotropic scattering is valid for every shape and cheap to build
    R = iso_correlation(geometry)
    return build_estimator(workload.scheme, R, pilot, geometry)


def measured_counts(workload, pilot=None):
    """
    Run the instrumented kernels of one workload

    Args:
        workload (Workload): Scheme, shape and phase
        pilot (PilotConfig, optional): Pilot parameters; unit powers by default

    Returns:
        FlopSnapshot: Counted multiplies and additions
    """
    geometry = ArrayGeometry(workload.n_h, workload.n_v, DELTA_H, DELTA_V, WAVELENGTH)
    pilot = pilot or PilotConfig(1, 1.0, 0.1)
    rng = np.random.default_rng(workload.seed)
    counter = FlopCounter()
    phase = Phase(workload.phase)

    if phase is Phase.APPLY_A:
        estimator = _workload_estimator(workload, geometry, pilot)
        estimator.apply(complex_normal(rng, (geometry.n,)), counter)
    elif phase is Phase.BUILD_Q_HAT:
        observations = complex_normal(rng, (workload.m_observations, geometry.n)).T
        q_hat = sample_covariance(observations, pilot, counter)
        if workload.scheme is not EstimatorKind.MMSE:
            block_toeplitz_average(q_hat, workload.n_h, workload.n_v, counter)
    else:
        raise InvalidInputError("build_a runs in dense LAPACK routines and is modeled, not measured")
    return counter.snapshot()


def chained_matvec_counts(n):
    """
    Counts of B1 (B2 b) versus (B1 B2) b for n x n matrices

    Returns:
        tuple: (FlopSnapshot of the chained matvec, FlopSnapshot of the product-first order)
    """
    chained, product_first = FlopCounter(), FlopCounter()
    chained.matmul(n, n)
    chained.matmul(n, n)
    product_first.matmul(n, n, n)
    product_first.matmul(n, n)
    return chained.snapshot(), product_first.snapshot()


def kron_matvec_counts(m, n, seed=0):
    """
    Counted cost of (A kron B) x through kron_matvec and through a dense matvec

    Args:
        m (int): Size of A
        n (int): Size of B
        seed (int): Seed of the random operands

    Returns:
        tuple: (FlopSnapshot of kron_matvec, FlopSnapshot of the dense product)
    """
    rng = np.random.default_rng(seed)
    left = complex_normal(rng, (m, m))
    right = complex_normal(rng, (n, n))
    x = complex_normal(rng, (m * n, 1))

    fast, dense = FlopCounter(), FlopCounter()
    kron_matvec(left, right, x, fast)
    dense.matmul(m * n, m * n)
    return fast.snapshot(), dense.snapshot()


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def crossover_report(n, n_h_grid=None, m_obs=DEFAULT_M_OBSERVATIONS, measure_limit=COMPLEXITY_MEASURE_LIMIT):
    """
    Per-phase counts of MMSE, KBA, NKP and KBA/DFT across array shapes of fixed size

    DFT rows are added for the ULA shape. Apply counts are measured when
    n <= measure_limit; every other entry is modeled.

    Args:
        n (int): Total number of antennas
        n_h_grid (list, optional): Column counts to report; powers-of-two divisors by default
        m_obs (int): Observations for the covariance estimate
        measure_limit (int): Largest N whose apply phase is measured

    Returns:
        list: Row dictionaries (scheme, n_h, n_v, M, phase, theoretical_count,
            measured_multiplies, measured_adds, modeled)
    """
    if n_h_grid is None:
        n_h_grid = [d for d in divisors(n) if d & (d - 1) == 0] or divisors(n)
    rows = []
    for n_h in n_h_grid:
        if n % n_h:
            raise InvalidInputError(f"n_h = {n_h} does not divide N = {n}")
        n_v = n // n_h
        schemes = [EstimatorKind.MMSE, EstimatorKind.KBA, EstimatorKind.NKP, EstimatorKind.KBA_DFT]
        if n_v == 1:
            schemes.append(EstimatorKind.DFT)
        for scheme in schemes:
            counts = theoretical_counts(scheme, n_h, n_v, m_obs)
            for phase in Phase:
                measured = None
                if phase is Phase.APPLY_A and n <= measure_limit:
                    measured = measured_counts(Workload(scheme, n_h, n_v, phase, m_obs))
                rows.append({
                    "scheme": scheme.value,
                    "n_h": n_h,
                    "n_v": n_v,
                    "M": m_obs,
                    "phase": phase.value,
                    "theoretical_count": counts.count(phase),
                    "measured_multiplies": "" if measured is None else measured.multiplies,
                    "measured_adds": "" if measured is None else measured.additions,
                    "modeled": measured is None,
                })
        logger.debug("complexity counts for %dx%d done", n_v, n_h)
    return rows
