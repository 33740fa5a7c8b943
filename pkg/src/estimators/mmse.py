"""
MMSE - Optimal linear estimator with solve-then-multiply application
"""
import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, pinvh

from channel.correlation import CorrelationMatrix
from channel.sampler import q_matrix
from estimators.estimator import EstimatorKind, LinearEstimator
from utils.errors import DegenerateInputError

logger = logging.getLogger(__name__)


class MmseEstimator(LinearEstimator):
    """A = R Q^{-1} / (tau_p sqrt(rho)) with Q = R + I / gamma"""

    kind = EstimatorKind.MMSE

    def __init__(self, R, pilot):
        """
        Factor Q once for reuse across pilot blocks

        A Q that is not positive definite (a sample estimate from fewer
        observations than antennas, or an indefinite structured estimate) is
        handled with its Hermitian pseudo-inverse.

        Args:
            R (CorrelationMatrix or numpy.ndarray): Channel correlation (true or estimated)
            pilot (PilotConfig): Pilot parameters
        """
        entries = R.entries if isinstance(R, CorrelationMatrix) else np.asarray(R, dtype=complex)
        super().__init__(entries.shape[0], pilot)
        if not np.all(np.isfinite(entries)):
            raise DegenerateInputError("correlation matrix has non-finite entries")
        self.r = entries
        self.q = q_matrix(entries, pilot.gamma)
        self._scaled_r = self.gain * entries

        try:
            self._cholesky = cho_factor(self.q, lower=True)
            self._q_pinv = None
        except LinAlgError:
            logger.warning("Q is not positive definite; using its pseudo-inverse")
            self._cholesky = None
            self._q_pinv = pinvh(self.q)

    @property
    def uses_pseudo_inverse(self):
        return self._cholesky is None

    def solve_q(self, y):
        """Q^{-1} y for an N x T block"""
        if self._cholesky is not None:
            return cho_solve(self._cholesky, y)
        return self._q_pinv @ y

    def _apply(self, y, counter):
        x = self.solve_q(y)
        if counter is not None:
            columns = y.shape[1]
            if self._cholesky is not None:
                # Forward and back substitution with the Cholesky factor
                counter.triangular_solve(self.n, columns)
                counter.triangular_solve(self.n, columns)
            else:
                counter.matmul(self.n, self.n, columns)
            counter.matmul(self.n, self.n, columns)
        return self._scaled_r @ x

    def materialize(self):
        if self._cholesky is None:
            return self._scaled_r @ self._q_pinv
        # Q and R are Hermitian, so R Q^{-1} = (Q^{-1} R)^H
        return self.gain * cho_solve(self._cholesky, self.r).conj().T
