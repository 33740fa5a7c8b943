"""
LoS - Rank-one estimator matched to a single plane wave
"""
import numpy as np

from channel.geometry import array_response
from estimators.estimator import EstimatorKind, LinearEstimator
from utils.errors import InvalidInputError


class LosEstimator(LinearEstimator):
    """A = (1 / (tau_p sqrt(rho))) * beta gamma / (1 + N beta gamma) * a a^H"""

    kind = EstimatorKind.LOS

    def __init__(self, geometry, angle, beta, pilot):
        """
        Build the estimator for a known direction and gain

        Args:
            geometry (ArrayGeometry): Array layout
            angle (AnglePair): Assumed direction of arrival
            beta (float): Assumed average channel gain
            pilot (PilotConfig): Pilot parameters
        """
        if not beta > 0:
            raise InvalidInputError(f"beta must be positive, got {beta}")
        super().__init__(geometry.n, pilot)
        self.response = array_response(geometry, angle)

        gamma = pilot.gamma
        if np.isinf(gamma):
            shrink = 1.0 / self.n
        else:
            shrink = beta * gamma / (1.0 + self.n * beta * gamma)
        self.coefficient = self.gain * shrink

    def _apply(self, y, counter):
        projection = self.response.conj() @ y
        if counter is not None:
            counter.matmul(1, self.n, y.shape[1])
            counter.matmul(self.n, 1, y.shape[1])
        return self.coefficient * np.outer(self.response, projection)

    def materialize(self):
        return self.coefficient * np.outer(self.response, self.response.conj())
