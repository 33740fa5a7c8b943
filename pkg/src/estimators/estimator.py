"""
Estimator - Base class for all linear channel estimators
"""
from enum import Enum

import numpy as np

from utils.errors import InvalidInputError


class EstimatorKind(Enum):
    """Estimator families, valued by their CLI names"""
    MMSE = "mmse"
    LS = "ls"
    LOS = "los"
    ISO = "iso"
    KBA = "kba"
    NKP = "nkp"
    DFT = "dft"
    KBA_DFT = "kba_dft"

    @classmethod
    def from_name(cls, name):
        """
        Look up a kind by its CLI name

        Args:
            name (str or EstimatorKind): CLI string such as "kba"

        Returns:
            EstimatorKind: Matching kind
        """
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            choices = ", ".join(kind.value for kind in cls)
            raise InvalidInputError(f"unknown estimator {name!r} (choose from {choices})") from None


class LinearEstimator:
    """
    Base class for estimators of the form h_hat = A y.

    Subclasses hold whatever factorized state makes A y cheap and implement
    _apply on an N x T block of observations. The pilot gain 1 / (tau_p sqrt(rho))
    is folded into that state.
    """

    kind = None

    def __init__(self, n, pilot):
        """
        Initialize an estimator

        Args:
            n (int): Number of antennas
            pilot (PilotConfig): Pilot parameters the estimator was built for
        """
        self.n = n
        self.pilot = pilot
        self.gain = 1.0 / pilot.scale

    def apply(self, y, counter=None):
        """
        Estimate channels from pilot observations

        Args:
            y (numpy.ndarray): Observation vector of length N, or N x T matrix
            counter (FlopCounter, optional): Receives the operation count of the fast path

        Returns:
            numpy.ndarray: Channel estimate(s) with the shape of y
        """
        y = np.asarray(y, dtype=complex)
        if y.ndim not in (1, 2) or y.shape[0] != self.n:
            raise InvalidInputError(f"{self.kind.value} estimator expects {self.n} rows, got shape {y.shape}")
        block = y.reshape(self.n, -1)
        estimate = self._apply(block, counter)
        return estimate[:, 0] if y.ndim == 1 else estimate

    def _apply(self, y, counter):
        raise NotImplementedError

    def materialize(self):
        """
        Explicit N x N estimator matrix

        Subclasses override this with a dense formula; the base version pushes
        the identity through the fast path.
        """
        return self._apply(np.eye(self.n, dtype=complex), None)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, gamma={self.pilot.gamma:.4g})"


def spectral_filter(eigenvalues, gamma):
    """
    Per-eigenvalue MMSE filter lambda / (lambda + 1 / gamma)

    Negative eigenvalues pass through the same formula; where the denominator
    vanishes the filter entry is 0.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    denominator = eigenvalues + 1.0 / gamma
    zero = denominator == 0
    return np.where(zero, 0.0, eigenvalues / np.where(zero, 1.0, denominator))
