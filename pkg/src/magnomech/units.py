"""Unit conversions used at the configuration/reporting boundary."""
import math

import numpy as np
from scipy.constants import hbar

TWO_PI = 2.0 * math.pi


def dbm_to_watts(dbm):
    return 1e-3 * np.power(10.0, np.asarray(dbm, dtype=float) / 10.0)


def watts_to_dbm(watts):
    watts = np.asarray(watts, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(watts / 1e-3)


def hz_to_rad(f_hz):
    return TWO_PI * np.asarray(f_hz, dtype=float)


def rad_to_hz(omega):
    return np.asarray(omega, dtype=float) / TWO_PI


def fwhm_hz_to_half_rate(fwhm_hz):
    """Quoted linewidth 2*kappa/2pi (Hz) -> HWHM angular rate kappa (rad/s)."""
    return math.pi * np.asarray(fwhm_hz, dtype=float)


def half_rate_to_fwhm_hz(kappa):
    return np.asarray(kappa, dtype=float) / math.pi


def photon_flux(power, omega_d):
    """Input photon flux |s_in|^2 (1/s) carried by ``power`` watts at ``omega_d``."""
    return np.asarray(power, dtype=float) / (hbar * omega_d)


__all__ = [
    "TWO_PI",
    "dbm_to_watts",
    "watts_to_dbm",
    "hz_to_rad",
    "rad_to_hz",
    "fwhm_hz_to_half_rate",
    "half_rate_to_fwhm_hz",
    "photon_flux",
    "hbar",
]
