"""Stokes-sideband emission and threshold-knee estimation for phonon lasing."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.constants import hbar

from ..errors import ValidationError
from .core import StateVector, Trajectory, integrate, steady_state


@dataclass(frozen=True)
class SidebandEstimate:
    power: float  # W, band-integrated
    frequency: float  # rad/s, peak offset below the drive
    settled: bool


def _band_power(y, dt, centre, half_band):
    """Band-limited mean square of ``y`` around FFT angular frequency ``centre``."""
    n = len(y)
    w = np.hanning(n)
    spec = np.fft.fft(y * w)
    freqs = 2 * math.pi * np.fft.fftfreq(n, dt)
    band = np.abs(freqs - centre) <= half_band
    if not band.any():
        return 0.0, centre
    psd = np.abs(spec[band]) ** 2 / (n * np.sum(w**2))
    peak = freqs[band][np.argmax(psd)]
    return float(np.sum(psd)), float(peak)


def stokes_sideband_power(trajectory: Trajectory, transient: float = 0.5,
                          bandwidth: float = 0.01, settle_tol: float = 0.05,
                          min_periods: int = 100) -> SidebandEstimate:
    """Output power emitted near ``omega_d - omega_b``.

    The first ``transient`` fraction of the trajectory is discarded.  The
    band is ``bandwidth * omega_b`` wide on each side.  A warning is issued,
    and ``settled`` is False, when the band power drifts by more than
    ``settle_tol`` between quarters of the analysed window.
    """
    params, drive = trajectory.params, trajectory.drive
    t = trajectory.t
    start = int(len(t) * transient)
    seg_t = t[start:]
    if len(seg_t) < 16:
        raise ValidationError("trajectory too short for a spectral estimate", "trajectory")
    dt = float(seg_t[1] - seg_t[0])
    if (seg_t[-1] - seg_t[0]) * params.omega_b / (2 * math.pi) < min_periods:
        raise ValidationError(f"need at least {min_periods} phonon periods after the transient",
                              "trajectory")
    out = math.sqrt(2 * params.kappa_e) * trajectory.a[start:]
    # Stokes field ~ exp(-i nu t) with nu = -(omega_b + frame_offset): FFT frequency +omega_b + offset
    centre = params.omega_b + trajectory.frame_offset
    half = bandwidth * params.omega_b
    ms, peak = _band_power(out, dt, centre, half)
    omega_s = drive.omega_d - params.omega_b
    power = hbar * omega_s * ms

    quarters = np.array_split(out, 4)
    qp = np.array([_band_power(q, dt, centre, half)[0] for q in quarters])
    settled = True
    if qp.max() > 0:
        spread = (qp.max() - qp.min()) / qp.max()
        settled = bool(spread <= settle_tol)
        if not settled:
            warnings.warn(f"sideband power not settled (quarter spread {spread:.2%})",
                          RuntimeWarning, stacklevel=2)
    return SidebandEstimate(power, peak - trajectory.frame_offset, settled)


def sideband_sweep(params, drive, powers: Sequence[float], t_end: float,
                   seed_amplitude: float = 1e4, stride: int = 20,
                   transient: float = 0.5) -> list:
    """Sideband estimate for each drive power, starting from a seeded fixed point.

    The seed displaces the phonon from its static value by ``seed_amplitude``.
    """
    results = []
    for p in powers:
        d = drive.with_power(float(p))
        fp = steady_state(params, d)
        init = StateVector(fp.a, fp.m, fp.b + seed_amplitude)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            traj = integrate(params, d, initial=init, t_span=(0.0, t_end), stride=stride)
            results.append(stokes_sideband_power(traj, transient=transient))
    return results


def threshold_knee(powers, sideband_powers, floor_ratio: float = 1e-3,
                   n_fit: int = 3) -> float:
    """Drive power where the above-threshold branch extrapolates to zero emission.

    Points more than ``floor_ratio`` times the largest emission are treated as
    lasing; a straight line through the ``n_fit`` lowest of them is
    extrapolated to zero.
    """
    powers = np.asarray(powers, dtype=float)
    sb = np.asarray(sideband_powers, dtype=float)
    order = np.argsort(powers)
    powers, sb = powers[order], sb[order]
    lasing = sb > floor_ratio * sb.max()
    if lasing.sum() < 2:
        raise ValidationError("need at least two lasing points to locate the knee",
                              "sideband_powers")
    x, y = powers[lasing][:n_fit], sb[lasing][:n_fit]
    slope, intercept = np.polyfit(x, y, 1)
    if slope <= 0:
        raise ValidationError("emission does not increase with drive power", "sideband_powers")
    return float(-intercept / slope)


def oscillation_frequency(trajectory: Trajectory, transient: float = 0.5) -> float:
    """Dominant angular frequency of the phonon amplitude (lab frame)."""
    start = int(len(trajectory.t) * transient)
    b = trajectory.b[start:] - np.mean(trajectory.b[start:])
    dt = float(trajectory.t[1] - trajectory.t[0])
    spec = np.abs(np.fft.fft(b * np.hanning(len(b))))
    freqs = 2 * math.pi * np.fft.fftfreq(len(b), dt)
    # b ~ exp(-i omega t) appears at negative FFT frequency
    return float(-freqs[np.argmax(spec)])
