"""
LS - Least-squares estimator that uses no statistical prior
"""
import numpy as np

from estimators.estimator import EstimatorKind, LinearEstimator


class LsEstimator(LinearEstimator):
    """A = I / (tau_p sqrt(rho))"""

    kind = EstimatorKind.LS

    def _apply(self, y, counter):
        if counter is not None:
            counter.scale(self.n, y.shape[1])
        return self.gain * y

    def materialize(self):
        return self.gain * np.eye(self.n, dtype=complex)
