"""
Approximation - Kronecker and circulant approximations of correlation matrices, with NSAE metrics
"""
import logging
from dataclasses import dataclass
from enum import Enum, auto

import numpy as np
from scipy.fft import fft

from channel.correlation import CorrelationMatrix
from utils.constants import HERMITIAN_TOLERANCE, NKP_MAX_ITERATIONS, NKP_TOLERANCE
from utils.errors import ConvergenceError, DegenerateInputError, InvalidInputError

logger = logging.getLogger(__name__)


class KroneckerMethod(Enum):
    """How a pair of Kronecker factors was obtained"""
    KBA = auto()
    NKP = auto()
    KBA_DFT = auto()


@dataclass(frozen=True, eq=False)
class KroneckerFactors:
    """Horizontal and vertical factors with R approximated by r_v kron r_h"""

    r_h: np.ndarray
    r_v: np.ndarray
    method: KroneckerMethod

    @property
    def n_h(self):
        return self.r_h.shape[0]

    @property
    def n_v(self):
        return self.r_v.shape[0]

    def kron(self):
        """The N x N matrix represented by the factors"""
        return np.kron(self.r_v, self.r_h)

    def is_hermitian(self, tolerance=HERMITIAN_TOLERANCE):
        return all(
            np.linalg.norm(m - m.conj().T) <= tolerance * max(np.linalg.norm(m), 1.0)
            for m in (self.r_h, self.r_v)
        )


@dataclass(frozen=True, eq=False)
class CirculantSpectrum:
    """
    Circulant approximation of a Hermitian Toeplitz matrix.

    The circulant matrix has first row first_row_c, i.e. C[m, l] = c[(l - m) mod N],
    and diagonalizes as C = F diag(eigenvalues) F^H with F[m, k] = exp(-2j pi m k / N) / sqrt(N).
    """

    first_row_c: np.ndarray
    eigenvalues: np.ndarray

    @property
    def n(self):
        return self.first_row_c.size

    def matrix(self):
        """Explicit N x N circulant matrix"""
        offsets = (np.arange(self.n)[None, :] - np.arange(self.n)[:, None]) % self.n
        return self.first_row_c[offsets]

    def real_eigenvalues(self, tolerance=HERMITIAN_TOLERANCE):
        """
        Eigenvalues as a real array

        Raises:
            InvalidInputError: The spectrum has a significant imaginary part (input was not Hermitian)
        """
        scale = max(np.max(np.abs(self.eigenvalues)), np.finfo(float).tiny)
        if np.max(np.abs(self.eigenvalues.imag)) > tolerance * scale:
            raise InvalidInputError("circulant spectrum is not real; the input row is not Hermitian Toeplitz")
        return self.eigenvalues.real.copy()


def _entries(R):
    if isinstance(R, CorrelationMatrix):
        return R.entries
    R = np.asarray(R, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {R.shape}")
    return R


def _check_shape(R, n_h, n_v):
    if n_h < 1 or n_v < 1 or n_h * n_v != R.shape[0]:
        raise InvalidInputError(f"shape {n_h}x{n_v} does not match a {R.shape[0]}x{R.shape[0]} matrix")


def kba_factors(R, n_h, n_v):
    """
    Kronecker factors taken from the matrix itself

    r_h is the leading n_h x n_h block; r_v is the stride-n_h subsampled matrix
    divided by R[0, 0], so that r_v[0, 0] = 1.

    Args:
        R (CorrelationMatrix or numpy.ndarray): N x N correlation matrix
        n_h (int): Number of columns
        n_v (int): Number of rows

    Returns:
        KroneckerFactors: Factors tagged KBA
    """
    R = _entries(R)
    _check_shape(R, n_h, n_v)
    pivot = R[0, 0].real
    if pivot == 0:
        raise DegenerateInputError("R[0, 0] is zero; the vertical factor is undefined")

    r_h = np.array(R[:n_h, :n_h])
    r_v = np.array(R[::n_h, ::n_h]) / pivot
    return KroneckerFactors(r_h, r_v, KroneckerMethod.KBA)


def rearrange(R, n_h, n_v):
    """
    Rearranged n_v^2 x n_h^2 matrix whose rank-one approximations map to Kronecker products

    Row j * n_v + k holds the flattened block R[j*n_h:(j+1)*n_h, k*n_h:(k+1)*n_h],
    so R = Y kron X if and only if the result equals outer(Y.ravel(), X.ravel()).
    """
    R = _entries(R)
    _check_shape(R, n_h, n_v)
    blocks = R.reshape(n_v, n_h, n_v, n_h).transpose(0, 2, 1, 3)
    return blocks.reshape(n_v * n_v, n_h * n_h)


def nkp_factors(R, n_h, n_v, tolerance=NKP_TOLERANCE, max_iterations=NKP_MAX_ITERATIONS):
    """
    Nearest Kronecker product in Frobenius norm

    Finds the dominant singular pair of the rearranged matrix by power
    iteration, then fixes the free phase so that trace(r_v) is real positive.

    Args:
        R (CorrelationMatrix or numpy.ndarray): N x N correlation matrix
        n_h (int): Number of columns
        n_v (int): Number of rows
        tolerance (float): Relative eigen-residual at which iteration stops
        max_iterations (int): Iteration cap

    Returns:
        KroneckerFactors: Factors tagged NKP

    Raises:
        ConvergenceError: The residual did not fall below tolerance in time
    """
    arranged = rearrange(R, n_h, n_v)
    if not np.any(arranged):
        return KroneckerFactors(np.zeros((n_h, n_h), complex), np.zeros((n_v, n_v), complex),
                                KroneckerMethod.NKP)

    # Start in the row space, from the row with the largest norm
    start = int(np.argmax(np.linalg.norm(arranged, axis=1)))
    v = arranged[start].conj()
    v = v / np.linalg.norm(v)

    residual = np.inf
    for iteration in range(1, max_iterations + 1):
        w = arranged.conj().T @ (arranged @ v)
        rayleigh = np.vdot(v, w).real
        residual = np.linalg.norm(w - rayleigh * v) / rayleigh
        v = w / np.linalg.norm(w)
        if residual <= tolerance:
            break
    else:
        raise ConvergenceError(
            f"nearest Kronecker power iteration stalled at residual {residual:.3e} "
            f"after {max_iterations} iterations",
            worst_change=float(residual), iterations=max_iterations)
    logger.debug("nearest Kronecker product converged in %d iterations", iteration)

    u = arranged @ v
    sigma = np.linalg.norm(u)
    u = u / sigma

    # vec(Y) vec(X)^T = sigma u v^H
    y = np.sqrt(sigma) * u.reshape(n_v, n_v)
    x = np.sqrt(sigma) * v.conj().reshape(n_h, n_h)

    trace = np.trace(y)
    if abs(trace) > 0:
        phase = trace / abs(trace)
        y, x = y / phase, x * phase

    r_v = (y + y.conj().T) / 2
    r_h = (x + x.conj().T) / 2
    return KroneckerFactors(r_h, r_v, KroneckerMethod.NKP)


def circulant_approximation(first_row_r):
    """
    Circulant approximation of the Hermitian Toeplitz matrix with the given first row

    c(0) = r(0) and c(n) = ((N - n) r(n) + n conj(r(N - n))) / N for n >= 1.

    Args:
        first_row_r (array_like): First row of the Toeplitz matrix

    Returns:
        CirculantSpectrum: First row of the circulant and its DFT eigenvalues
    """
    r = np.asarray(first_row_r, dtype=complex).ravel()
    size = r.size
    if size < 1:
        raise InvalidInputError("first row must not be empty")

    n = np.arange(1, size)
    c = np.empty(size, dtype=complex)
    c[0] = r[0]
    c[1:] = ((size - n) * r[1:] + n * np.conj(r[size - n])) / size
    return CirculantSpectrum(c, fft(c))


def kba_dft_factors(R, n_h, n_v):
    """
    KBA factors with each factor replaced by its circulant approximation

    Returns:
        KroneckerFactors: Hermitian circulant factors tagged KBA_DFT
    """
    kba = kba_factors(R, n_h, n_v)
    r_h = circulant_approximation(kba.r_h[0]).matrix()
    r_v = circulant_approximation(kba.r_v[0]).matrix()
    return KroneckerFactors(r_h, r_v, KroneckerMethod.KBA_DFT)


def nsae_r(R, factors):
    """
    Normalized squared approximation error of a Kronecker representation

    Args:
        R (CorrelationMatrix or numpy.ndarray): Reference matrix
        factors (KroneckerFactors): Approximating factors

    Returns:
        float: ||R - r_v kron r_h||_F^2 / ||R||_F^2
    """
    R = _entries(R)
    _check_shape(R, factors.n_h, factors.n_v)
    return nsae_a(R, factors.kron())


def nsae_a(A_ref, A):
    """
    Normalized squared Frobenius distance between two matrices

    Returns:
        float: ||A_ref - A||_F^2 / ||A_ref||_F^2
    """
    A_ref = np.asarray(A_ref)
    A = np.asarray(A)
    if A_ref.shape != A.shape:
        raise InvalidInputError(f"shape mismatch: {A_ref.shape} vs {A.shape}")
    reference = np.linalg.norm(A_ref) ** 2
    if reference == 0:
        raise DegenerateInputError("reference matrix is zero")
    return float(np.linalg.norm(A_ref - A) ** 2 / reference)
