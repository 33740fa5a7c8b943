"""
Factory - Builds any estimator kind from a correlation matrix and a scenario
"""
from channel.approximation import kba_dft_factors, kba_factors, nkp_factors
from channel.correlation import CorrelationMatrix
from estimators.dft import DftEstimator, KbaDftEstimator
from estimators.estimator import EstimatorKind
from estimators.iso import IsoEstimator
from estimators.kronecker import KroneckerEstimator
from estimators.los import LosEstimator
from estimators.ls import LsEstimator
from estimators.mmse import MmseEstimator
from utils.errors import InvalidInputError


def build_mmse(R, pilot):
    return MmseEstimator(R, pilot)


def build_ls(pilot, n):
    return LsEstimator(n, pilot)


def build_los(angle, beta, pilot, geometry):
    return LosEstimator(geometry, angle, beta, pilot)


def build_iso(geometry, pilot, eigen_threshold=None):
    if eigen_threshold is None:
        return IsoEstimator(geometry, pilot)
    return IsoEstimator(geometry, pilot, eigen_threshold)


def build_kba(factors, pilot):
    return KroneckerEstimator(factors, pilot)


def build_nkp_estimator(factors, pilot):
    return KroneckerEstimator(factors, pilot)


def build_dft(first_row_r, pilot):
    return DftEstimator(first_row_r, pilot)


def build_kba_dft(factors, pilot):
    return KbaDftEstimator(factors, pilot)


def build_estimator(kind, R, pilot, geometry, profile=None):
    """
    Build an estimator by CLI name

    Args:
        kind (str or EstimatorKind): One of mmse, ls, los, iso, kba, nkp, dft, kba_dft
        R (CorrelationMatrix or numpy.ndarray): Correlation matrix the estimator may use
            (the true one, or an estimate)
        pilot (PilotConfig): Pilot parameters
        geometry (ArrayGeometry): Array layout
        profile (ScatteringProfile, optional): Nominal direction and gain, needed by los

    Returns:
        LinearEstimator: Built estimator
    """
    kind = EstimatorKind.from_name(kind)
    entries = R.entries if isinstance(R, CorrelationMatrix) else R

    if kind is EstimatorKind.MMSE:
        return build_mmse(entries, pilot)
    if kind is EstimatorKind.LS:
        return build_ls(pilot, geometry.n)
    if kind is EstimatorKind.LOS:
        if profile is None:
            raise InvalidInputError("the LoS estimator needs the nominal direction and gain of a scattering profile")
        return build_los(profile.nominal_angle, profile.gain_beta, pilot, geometry)
    if kind is EstimatorKind.ISO:
        return build_iso(geometry, pilot)
    if kind is EstimatorKind.KBA:
        return build_kba(kba_factors(entries, geometry.n_h, geometry.n_v), pilot)
    if kind is EstimatorKind.NKP:
        return build_nkp_estimator(nkp_factors(entries, geometry.n_h, geometry.n_v), pilot)
    if kind is EstimatorKind.DFT:
        if not geometry.is_ula:
            raise InvalidInputError(f"the DFT estimator needs a ULA, got {geometry.n_v}x{geometry.n_h}")
        # Both horizontal and vertical ULAs are Toeplitz in vector order
        return build_dft(entries[0], pilot)
    return build_kba_dft(kba_dft_factors(entries, geometry.n_h, geometry.n_v), pilot)
