"""
DFT - Circulant-approximation estimators applied in the Fourier domain
"""
import numpy as np
from scipy.fft import fft, fft2, ifft, ifft2
from scipy.linalg import dft

from channel.approximation import CirculantSpectrum, KroneckerMethod, circulant_approximation
from estimators.estimator import EstimatorKind, LinearEstimator, spectral_filter
from utils.errors import InvalidInputError


class DftEstimator(LinearEstimator):
    """
    A = F diag(d) F^H / (tau_p sqrt(rho)) for a ULA, with d from the circulant spectrum.

    F[m, k] = exp(-2j pi m k / N) / sqrt(N), so A y = fft(d * ifft(y)).
    """

    kind = EstimatorKind.DFT

    def __init__(self, first_row_r, pilot):
        """
        Build from the first row of a Hermitian Toeplitz correlation matrix

        Args:
            first_row_r (array_like): First row of R
            pilot (PilotConfig): Pilot parameters
        """
        self.spectrum = circulant_approximation(first_row_r)
        super().__init__(self.spectrum.n, pilot)
        self.filter = spectral_filter(self.spectrum.real_eigenvalues(), pilot.gamma)
        self._scaled_filter = self.gain * self.filter

    def _apply(self, y, counter):
        if counter is not None:
            counter.fft(self.n, y.shape[1])
            counter.scale(self.n, y.shape[1])
            counter.fft(self.n, y.shape[1])
        return fft(self._scaled_filter[:, None] * ifft(y, axis=0), axis=0)

    def materialize(self):
        basis = dft(self.n) / np.sqrt(self.n)
        return self.gain * (basis * self.filter) @ basis.conj().T


class KbaDftEstimator(LinearEstimator):
    """
    Kronecker estimator with both factors replaced by circulant approximations.

    Both eigenbases are DFT bases, so A y is a 2-D FFT over the (n_v, n_h)
    antenna grid, a per-bin filter and an inverse 2-D FFT.
    """

    kind = EstimatorKind.KBA_DFT

    def __init__(self, factors, pilot):
        """
        Args:
            factors (KroneckerFactors): Circulant factors from kba_dft_factors
            pilot (PilotConfig): Pilot parameters
        """
        if factors.method is not KroneckerMethod.KBA_DFT:
            raise InvalidInputError("KBA/DFT estimator needs circulant factors from kba_dft_factors")
        super().__init__(factors.n_h * factors.n_v, pilot)
        self.n_h, self.n_v = factors.n_h, factors.n_v

        # The factors are already circulant, so their first rows diagonalize directly
        lambda_h = CirculantSpectrum(factors.r_h[0], fft(factors.r_h[0])).real_eigenvalues()
        lambda_v = CirculantSpectrum(factors.r_v[0], fft(factors.r_v[0])).real_eigenvalues()
        self.eigenvalues = np.outer(lambda_v, lambda_h)
        self.filter = spectral_filter(self.eigenvalues, pilot.gamma)
        self._scaled_filter = self.gain * self.filter

    def _apply(self, y, counter):
        columns = y.shape[1]
        grid = y.reshape(self.n_v, self.n_h, columns)
        if counter is not None:
            for _ in range(2):
                counter.fft(self.n_h, self.n_v * columns)
                counter.fft(self.n_v, self.n_h * columns)
            counter.scale(self.n, columns)
        spectrum = ifft2(grid, axes=(0, 1))
        estimate = fft2(self._scaled_filter[:, :, None] * spectrum, axes=(0, 1))
        return estimate.reshape(self.n, columns)

    def materialize(self):
        basis = np.kron(dft(self.n_v), dft(self.n_h)) / np.sqrt(self.n)
        return self.gain * (basis * self.filter.ravel()) @ basis.conj().T
