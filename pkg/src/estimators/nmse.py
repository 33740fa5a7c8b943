"""
NMSE - Analytic and Monte Carlo normalized mean squared error of linear estimators
"""
import numpy as np

from channel.correlation import CorrelationMatrix
from channel.sampler import observe_pilot, q_matrix, sample_channel
from utils.errors import DegenerateInputError, InvalidInputError

# Trials drawn per batch in the Monte Carlo estimate
_BATCH = 1024


def analytic_nmse(A, R, pilot):
    """
    E||h - A y||^2 / E||h||^2 in closed form

    NMSE = 1 - [2 tau_p sqrt(rho) Re tr(R A) - rho tau_p^2 tr(A Q A^H)] / tr(R),
    so that A = 0 gives 1 and the MMSE matrix gives the minimum.

    Args:
        A (numpy.ndarray): N x N estimator matrix
        R (CorrelationMatrix or numpy.ndarray): True channel correlation
        pilot (PilotConfig): Pilot parameters

    Returns:
        float: NMSE value
    """
    entries = R.entries if isinstance(R, CorrelationMatrix) else np.asarray(R, dtype=complex)
    A = np.asarray(A, dtype=complex)
    if A.shape != entries.shape:
        raise InvalidInputError(f"shape mismatch: A is {A.shape}, R is {entries.shape}")
    trace_r = np.trace(entries).real
    if trace_r <= 0:
        raise DegenerateInputError("tr(R) must be positive")

    s = pilot.scale
    q = q_matrix(entries, pilot.gamma)
    cross = np.sum(entries.T * A).real  # Re tr(R A)
    quadratic = np.sum((A @ q) * A.conj()).real  # tr(A Q A^H)
    return float(1.0 - (2.0 * s * cross - s ** 2 * quadratic) / trace_r)


def empirical_nmse(estimator, sampler, pilot, trials, rng, with_stderr=False):
    """
    Monte Carlo NMSE: sum ||h - h_hat||^2 / sum ||h||^2 over trials

    Args:
        estimator (LinearEstimator): Estimator under test
        sampler (ChannelSampler): True channel distribution
        pilot (PilotConfig): Pilot parameters for the observations
        trials (int): Number of channel/noise realizations
        rng (numpy.random.Generator): Random stream
        with_stderr (bool): Also return a delta-method standard error

    Returns:
        float or tuple: NMSE, or (NMSE, standard error)
    """
    if trials < 1:
        raise InvalidInputError("trials must be at least 1")

    errors = np.empty(trials)
    powers = np.empty(trials)
    for start in range(0, trials, _BATCH):
        count = min(_BATCH, trials - start)
        h = sample_channel(sampler, rng, count)
        y = observe_pilot(h, pilot, rng)
        h_hat = estimator.apply(y)
        errors[start:start + count] = np.sum(np.abs(h - h_hat) ** 2, axis=0)
        powers[start:start + count] = np.sum(np.abs(h) ** 2, axis=0)

    total_power = powers.sum()
    if total_power == 0:
        raise DegenerateInputError("channel realizations carry no power")
    nmse = float(errors.sum() / total_power)
    if not with_stderr:
        return nmse

    # Linearized ratio estimator
    spread = np.std(errors - nmse * powers, ddof=1) if trials > 1 else 0.0
    stderr = float(spread / (np.sqrt(trials) * powers.mean()))
    return nmse, stderr
