"""
ISO - Subspace projector onto the dominant eigenspace of isotropic scattering
"""
import logging

from scipy.linalg import eigh

from channel.correlation import iso_correlation
from estimators.estimator import EstimatorKind, LinearEstimator
from utils.constants import ISO_EIGEN_THRESHOLD

logger = logging.getLogger(__name__)


class IsoEstimator(LinearEstimator):
    """A = U U^H / (tau_p sqrt(rho)), U spanning the non-negligible eigenvectors of R_iso"""

    kind = EstimatorKind.ISO

    def __init__(self, geometry, pilot, eigen_threshold=ISO_EIGEN_THRESHOLD):
        """
        Build the projector from the geometry alone

        Args:
            geometry (ArrayGeometry): Array layout
            pilot (PilotConfig): Pilot parameters
            eigen_threshold (float): Keep eigenvalues >= eigen_threshold * max eigenvalue
        """
        super().__init__(geometry.n, pilot)
        eigenvalues, eigenvectors = eigh(iso_correlation(geometry).entries)
        keep = eigenvalues >= eigen_threshold * eigenvalues[-1]
        self.basis = eigenvectors[:, keep]
        logger.debug("ISO subspace keeps %d of %d dimensions", self.subspace_dimension, self.n)

    @property
    def subspace_dimension(self):
        return self.basis.shape[1]

    def _apply(self, y, counter):
        coordinates = self.basis.conj().T @ y
        if counter is not None:
            counter.matmul(self.subspace_dimension, self.n, y.shape[1])
            counter.matmul(self.n, self.subspace_dimension, y.shape[1])
        return self.gain * (self.basis @ coordinates)

    def materialize(self):
        return self.gain * (self.basis @ self.basis.conj().T)
