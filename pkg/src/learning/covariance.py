"""
Covariance - Learning Q and R from pilot observations: sample, regularized and structured estimates
"""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import eigh, toeplitz

from channel.correlation import CorrelationMatrix, Provenance
from utils.constants import DEFAULT_ETA
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


class CovarianceMethod(Enum):
    """Covariance learning policies, valued by their CLI names"""
    SAMPLE = "sample"
    REGULARIZED = "regularized"
    STRUCTURED = "structured"


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    """Estimated observation correlation q_hat and the implied channel correlation r_hat = q_hat - I / gamma"""

    q_hat: np.ndarray
    r_hat: np.ndarray
    method: CovarianceMethod
    m_observations: int
    eta: float = 1.0

    @classmethod
    def from_q(cls, q_hat, gamma, method, m_observations, eta=1.0):
        """
        Symmetrize q_hat and derive r_hat

        Args:
            q_hat (numpy.ndarray): Estimated Q
            gamma (float): Transmit SNR
            method (CovarianceMethod): How q_hat was obtained
            m_observations (int): Number of pilot observations used
            eta (float): Shrinkage weight applied (1 means none)

        Returns:
            CovarianceEstimate: The estimate
        """
        q_hat = np.asarray(q_hat, dtype=complex)
        q_hat = (q_hat + q_hat.conj().T) / 2
        return cls(q_hat, r_from_q(q_hat, gamma), method, int(m_observations), float(eta))

    @property
    def n(self):
        return self.q_hat.shape[0]

    def correlation(self):
        """r_hat wrapped as an (unvalidated) estimated correlation matrix"""
        return CorrelationMatrix(self.r_hat, Provenance.ESTIMATED)


def _observation_block(observations, n=None):
    if isinstance(observations, np.ndarray) and observations.ndim == 2:
        block = observations
    else:
        observations = list(observations)
        if not observations:
            raise InvalidInputError("at least one observation is needed")
        block = np.column_stack(observations)
    if block.shape[1] < 1:
        raise InvalidInputError("at least one observation is needed")
    if n is not None and block.shape[0] != n:
        raise InvalidInputError(f"observations have {block.shape[0]} rows, expected {n}")
    return np.asarray(block, dtype=complex)


def sample_covariance(observations, pilot, counter=None):
    """
    Sample correlation (1/M) sum y y^H / (rho tau_p^2)

    Args:
        observations (numpy.ndarray or list): N x M matrix of observations, or M vectors of length N
        pilot (PilotConfig): Pilot parameters
        counter (FlopCounter, optional): Receives the M N^2 outer-product cost

    Returns:
        numpy.ndarray: Hermitian N x N estimate of Q
    """
    y = _observation_block(observations)
    n, m = y.shape
    q_hat = (y @ y.conj().T) / (m * pilot.scale ** 2)
    if counter is not None:
        counter.matmul(n, m, n)
    return (q_hat + q_hat.conj().T) / 2


def regularize(q_hat, eta, target_diagonal=None):
    """
    Shrink off-diagonal entries: eta * Q + (1 - eta) * diag(target)

    Args:
        q_hat (numpy.ndarray): Estimated Q
        eta (float): Weight in [0, 1]; 1 leaves q_hat unchanged
        target_diagonal (numpy.ndarray, optional): Diagonal of the shrinkage target;
            defaults to the diagonal of q_hat

    Returns:
        numpy.ndarray: Regularized estimate
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"eta must lie in [0, 1], got {eta}")
    q_hat = np.asarray(q_hat, dtype=complex)
    if eta == 1.0:
        return q_hat.copy()
    diagonal = np.diag(q_hat) if target_diagonal is None else np.asarray(target_diagonal)
    return eta * q_hat + (1.0 - eta) * np.diag(diagonal)


def r_from_q(q_hat, gamma):
    """R_hat = Q_hat - I / gamma, kept even when indefinite"""
    if not gamma > 0:
        raise InvalidInputError(f"gamma must be positive, got {gamma}")
    q_hat = np.asarray(q_hat, dtype=complex)
    return q_hat - np.eye(q_hat.shape[0]) / gamma


def block_toeplitz_average(q_hat, n_h, n_v, counter=None):
    """
    Average the n_h x n_h blocks of q_hat along each block diagonal

    Args:
        q_hat (numpy.ndarray): N x N matrix with N = n_h * n_v
        n_h (int): Block size
        n_v (int): Number of block rows
        counter (FlopCounter, optional): Receives the additions

    Returns:
        numpy.ndarray: (n_v, n_h, n_h) array; entry j is the mean of the blocks (m, m + j)
    """
    q_hat = np.asarray(q_hat, dtype=complex)
    if q_hat.shape != (n_h * n_v, n_h * n_v):
        raise InvalidInputError(f"a {q_hat.shape} matrix cannot be split into {n_v}x{n_v} blocks of size {n_h}")

    grid = q_hat.reshape(n_v, n_h, n_v, n_h).transpose(0, 2, 1, 3)
    blocks = np.empty((n_v, n_h, n_h), dtype=complex)
    for j in range(n_v):
        rows = np.arange(n_v - j)
        blocks[j] = grid[rows, rows + j].mean(axis=0)
    if counter is not None:
        counter.add(0, n_h * n_h * n_v * (n_v - 1) // 2)
    return blocks


def toeplitz_average_block(block):
    """
    Replace each diagonal of a square block by its mean

    Args:
        block (numpy.ndarray): n x n matrix

    Returns:
        numpy.ndarray: Toeplitz matrix with the same diagonal means (not necessarily Hermitian)
    """
    block = np.asarray(block, dtype=complex)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        raise InvalidInputError(f"block must be square, got shape {block.shape}")
    size = block.shape[0]
    first_row = np.array([np.diagonal(block, offset).mean() for offset in range(size)])
    first_column = np.array([np.diagonal(block, -offset).mean() for offset in range(size)])
    return toeplitz(first_column, first_row)


def assemble_structured(blocks_toe, n_h, n_v, gamma, m_observations=1, eta=1.0, target_diagonal=None):
    """
    Hermitian block-Toeplitz Q_toe from its first block row

    Block (m, l) is blocks_toe[l - m] above the diagonal and its conjugate
    transpose below it.

    Args:
        blocks_toe (numpy.ndarray): (n_v, n_h, n_h) first block row
        n_h (int): Block size
        n_v (int): Number of block rows
        gamma (float): Transmit SNR used for r_hat
        m_observations (int): Observations behind the blocks
        eta (float): Optional shrinkage of the assembled matrix
        target_diagonal (numpy.ndarray, optional): Shrinkage target diagonal

    Returns:
        CovarianceEstimate: Structured estimate
    """
    blocks_toe = np.asarray(blocks_toe, dtype=complex)
    if blocks_toe.shape != (n_v, n_h, n_h):
        raise InvalidInputError(f"expected blocks of shape {(n_v, n_h, n_h)}, got {blocks_toe.shape}")

    q_toe = np.empty((n_v * n_h, n_v * n_h), dtype=complex)
    for m in range(n_v):
        for l in range(n_v):
            block = blocks_toe[l - m] if l >= m else blocks_toe[m - l].conj().T
            q_toe[m * n_h:(m + 1) * n_h, l * n_h:(l + 1) * n_h] = block

    q_toe = regularize(q_toe, eta, target_diagonal)
    return CovarianceEstimate.from_q(q_toe, gamma, CovarianceMethod.STRUCTURED, m_observations, eta)


def structured_projection(q_hat, n_h, n_v, gamma, m_observations=1):
    """Block averaging, per-block Toeplitz averaging and Hermitian assembly in one step"""
    blocks = block_toeplitz_average(q_hat, n_h, n_v)
    blocks_toe = np.stack([toeplitz_average_block(block) for block in blocks])
    return assemble_structured(blocks_toe, n_h, n_v, gamma, m_observations)


def estimate_covariance(observations, pilot, n_h, n_v, method, eta=None, counter=None):
    """
    Covariance learning pipeline

    Args:
        observations (numpy.ndarray or list): N x M pilot observations
        pilot (PilotConfig): Pilot parameters
        n_h (int): Columns of the array
        n_v (int): Rows of the array
        method (str or CovarianceMethod): sample, regularized or structured
        eta (float, optional): Shrinkage weight; regularized defaults to DEFAULT_ETA,
            structured defaults to no shrinkage
        counter (FlopCounter, optional): Receives the sample covariance cost

    Returns:
        CovarianceEstimate: Estimated Q and R
    """
    method = CovarianceMethod(method.value if isinstance(method, CovarianceMethod) else str(method).lower())
    y = _observation_block(observations, n_h * n_v)
    m = y.shape[1]
    q_sample = sample_covariance(y, pilot, counter)

    if method is CovarianceMethod.SAMPLE:
        return CovarianceEstimate.from_q(q_sample, pilot.gamma, method, m)

    if method is CovarianceMethod.REGULARIZED:
        eta = DEFAULT_ETA if eta is None else eta
        return CovarianceEstimate.from_q(regularize(q_sample, eta), pilot.gamma, method, m, eta)

    blocks = block_toeplitz_average(q_sample, n_h, n_v, counter)
    blocks_toe = np.stack([toeplitz_average_block(block) for block in blocks])
    # Shrink toward the sample diagonal so eta = 0 agrees with the regularized path
    return assemble_structured(blocks_toe, n_h, n_v, pilot.gamma, m,
                               eta=1.0 if eta is None else eta, target_diagonal=np.diag(q_sample))


def clip_psd(r_hat):
    """
    Project an estimated correlation onto the PSD cone by zeroing negative eigenvalues

    Args:
        r_hat (numpy.ndarray or CorrelationMatrix): Hermitian estimate

    Returns:
        CorrelationMatrix: PSD matrix tagged ESTIMATED
    """
    entries = r_hat.entries if isinstance(r_hat, CorrelationMatrix) else np.asarray(r_hat, dtype=complex)
    eigenvalues, eigenvectors = eigh((entries + entries.conj().T) / 2)
    negative = eigenvalues < 0
    if np.any(negative):
        logger.warning("clipping %d negative eigenvalues (min %.3e) of an estimated correlation",
                       int(negative.sum()), eigenvalues.min())
    clipped = (eigenvectors * np.maximum(eigenvalues, 0.0)) @ eigenvectors.conj().T
    return CorrelationMatrix(clipped, Provenance.ESTIMATED)
