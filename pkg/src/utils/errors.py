"""
Errors - Exception hierarchy shared by every module
"""


class MimoEstimError(Exception):
    """Base class for all simulator errors"""


class InvalidInputError(MimoEstimError, ValueError):
    """Rejected input: out-of-range values, dimension mismatch, broken structure"""


class DegenerateInputError(MimoEstimError):
    """Input is well-formed but numerically degenerate (zero pivot, zero trace, singular system)"""


class ConvergenceError(MimoEstimError):
    """An iterative numerical procedure did not converge"""

    def __init__(self, message, worst_index=None, worst_change=None, iterations=None):
        super().__init__(message)
        self.worst_index = worst_index
        self.worst_change = worst_change
        self.iterations = iterations


class InsufficientSamplesError(MimoEstimError):
    """Monte Carlo expectations are too noisy to form the requested quantity"""


class ConfigError(MimoEstimError):
    """Scenario configuration could not be loaded or validated"""
