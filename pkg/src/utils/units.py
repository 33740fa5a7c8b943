"""
Units - dB and dBm conversions used at the config boundary
"""
import numpy as np


def db_to_linear(value_db):
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    """Convert a linear power ratio to dB."""
    return 10.0 * np.log10(value)


def dbm_to_watt(value_dbm):
    """Convert a power in dBm to watts."""
    return db_to_linear(value_dbm) * 1e-3


def watt_to_dbm(value_watt):
    """Convert a power in watts to dBm."""
    return linear_to_db(np.asarray(value_watt, dtype=float) * 1e3)
