"""
Kronecker - KBA/NKP estimators applied through Kronecker-structured matvecs
"""
import numpy as np
from scipy.linalg import eigh

from channel.approximation import KroneckerMethod
from estimators.estimator import EstimatorKind, LinearEstimator, spectral_filter
from utils.errors import InvalidInputError


def kron_matvec(left, right, x, counter=None):
    """
    (left kron right) @ x without forming the Kronecker product

    Args:
        left (numpy.ndarray): n_v x n_v matrix
        right (numpy.ndarray): n_h x n_h matrix
        x (numpy.ndarray): (n_v * n_h) x T block
        counter (FlopCounter, optional): Receives (n_h + n_v) * N * T multiplies

    Returns:
        numpy.ndarray: (n_v * n_h) x T block
    """
    n_v, n_h = left.shape[0], right.shape[0]
    columns = x.shape[1]
    if x.shape[0] != n_v * n_h:
        raise InvalidInputError(f"operand has {x.shape[0]} rows, expected {n_v * n_h}")

    # Row-major reshape puts the horizontal index last: x[j * n_h + i] -> grid[j, i]
    grid = x.reshape(n_v, n_h, columns)
    grid = np.matmul(right, grid)
    result = left @ grid.reshape(n_v, n_h * columns)
    if counter is not None:
        counter.matmul(n_h, n_h, n_v * columns)
        counter.matmul(n_v, n_v, n_h * columns)
    return result.reshape(n_v * n_h, columns)


class KroneckerEstimator(LinearEstimator):
    """
    A = (U_v kron U_h) D (U_v kron U_h)^H / (tau_p sqrt(rho)).

    D holds lambda / (lambda + 1 / gamma) for the products lambda of the factor
    eigenvalues. Built from KBA or NKP factors.
    """

    def __init__(self, factors, pilot):
        """
        Diagonalize both factors

        Args:
            factors (KroneckerFactors): Hermitian factors (KBA or NKP)
            pilot (PilotConfig): Pilot parameters
        """
        if not factors.is_hermitian():
            raise InvalidInputError("Kronecker factors must be Hermitian")
        super().__init__(factors.n_h * factors.n_v, pilot)
        self.kind = EstimatorKind.NKP if factors.method is KroneckerMethod.NKP else EstimatorKind.KBA
        self.factors = factors

        lambda_h, self.u_h = eigh((factors.r_h + factors.r_h.conj().T) / 2)
        lambda_v, self.u_v = eigh((factors.r_v + factors.r_v.conj().T) / 2)
        self.eigenvalues = np.kron(lambda_v, lambda_h)
        self.filter = spectral_filter(self.eigenvalues, pilot.gamma)
        self._scaled_filter = self.gain * self.filter

        # With a 1 x 1 factor the Kronecker product is a scaled copy of the other factor, applied as one dense matrix
        self._dense = self.materialize() if min(factors.n_h, factors.n_v) == 1 else None

    def _apply(self, y, counter):
        if self._dense is not None:
            if counter is not None:
                counter.matmul(self.n, self.n, y.shape[1])
            return self._dense @ y
        z = kron_matvec(self.u_v.conj().T, self.u_h.conj().T, y, counter)
        z = self._scaled_filter[:, None] * z
        if counter is not None:
            counter.scale(self.n, y.shape[1])
        return kron_matvec(self.u_v, self.u_h, z, counter)

    def materialize(self):
        basis = np.kron(self.u_v, self.u_h)
        return self.gain * (basis * self.filter) @ basis.conj().T
