"""
Counter - Complex multiply/add accounting for the instrumented numeric kernels
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FlopSnapshot:
    """Counts captured at one point of a measured region"""

    multiplies: int
    additions: int


class FlopCounter:
    """
    Accumulates complex multiplies and additions reported by the kernels.

    Counts are operation models of the kernels, not hardware counters: a dense
    m x n times n x p product costs m*n*p multiplies, a length-n FFT costs
    (n/2) log2(n) multiplies and n log2(n) additions.
    """

    def __init__(self):
        """Initialize an empty counter"""
        self.multiplies = 0
        self.additions = 0

    def reset(self):
        """Start a new measured region"""
        self.multiplies = 0
        self.additions = 0

    def snapshot(self):
        return FlopSnapshot(self.multiplies, self.additions)

    def add(self, multiplies=0, additions=0):
        self.multiplies += int(multiplies)
        self.additions += int(additions)

    def matmul(self, m, n, p=1):
        """
        Dense (m x n) @ (n x p) product

        Args:
            m (int): Rows of the left operand
            n (int): Inner dimension
            p (int): Columns of the right operand
        """
        self.add(m * n * p, m * max(n - 1, 0) * p)

    def scale(self, n, p=1):
        """Elementwise product of n entries over p columns"""
        self.add(n * p, 0)

    def fft(self, n, p=1):
        """Length-n transform over p columns"""
        stages = int(np.ceil(np.log2(n))) if n > 1 else 0
        self.add((n // 2) * stages * p, n * stages * p)

    def triangular_solve(self, n, p=1):
        """Forward or back substitution with an n x n triangular matrix"""
        self.add((n * (n + 1) // 2) * p, (n * (n - 1) // 2) * p)
