"""
Decibel conversions used at the configuration and CSV boundaries.
Everything inside the simulator is linear scale.
"""
import math


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale"""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """Convert a linear power ratio to dB"""
    if value <= 0:
        raise ValueError(f"Cannot express non-positive ratio {value} in dB")
    return 10.0 * math.log10(value)


def dbm_to_mw(value_dbm: float) -> float:
    """Convert dBm to milliwatts"""
    return db_to_linear(value_dbm)


def mw_to_dbm(value_mw: float) -> float:
    """Convert milliwatts to dBm"""
    return linear_to_db(value_mw)
