"""
Combining - Receive combiners built from channel estimates
"""
from enum import Enum

import numpy as np

from utils.errors import InvalidInputError


class Combiner(Enum):
    """Receive combining schemes, valued by their CLI names"""
    RZF = "rzf"
    MR = "mr"


def rzf_combiner(h_hat_all, noise_over_power):
    """
    Regularized zero-forcing: v_k = (sum_i h_i h_i^H + (sigma2 / rho) I)^{-1} h_k

    Uses the push-through form V = H (H^H H + c I_K)^{-1}, which needs a K x K
    solve instead of an N x N one.

    Args:
        h_hat_all (numpy.ndarray): N x K estimates, or T x N x K for T blocks
        noise_over_power (float): sigma2 / rho, must be positive

    Returns:
        numpy.ndarray: Combiners with the shape of h_hat_all
    """
    if not noise_over_power > 0:
        raise InvalidInputError("RZF needs sigma2 / rho > 0")
    h = np.asarray(h_hat_all, dtype=complex)
    if h.ndim not in (2, 3):
        raise InvalidInputError(f"expected N x K or T x N x K estimates, got shape {h.shape}")
    h_conj_t = np.swapaxes(h, -1, -2).conj()
    k = h.shape[-1]
    gram = h_conj_t @ h + noise_over_power * np.eye(k)
    # gram is Hermitian, so V = H gram^{-1} = (gram^{-1} H^H)^H
    return np.swapaxes(np.linalg.solve(gram, h_conj_t), -1, -2).conj()


def mr_combiner(h_hat_all):
    """Maximum-ratio combining: v_k = h_hat_k"""
    return np.array(h_hat_all, dtype=complex)


def combine(combiner, h_hat_all, noise_over_power):
    """Dispatch on the Combiner enum"""
    if Combiner(combiner) is Combiner.RZF:
        return rzf_combiner(h_hat_all, noise_over_power)
    return mr_combiner(h_hat_all)
