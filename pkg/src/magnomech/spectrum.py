"""Weak-probe reflection spectra of the driven three-mode system.

The probe enters through the cavity port; ``r = 1 - 2 kappa_e chi_aa`` with
``chi_aa`` the photon element of ``(-i nu - J)^-1``, where ``J`` is the 6x6
fluctuation drift matrix and ``nu = omega_s - omega_d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import model
from .dynamics import core
from .errors import InstabilityError, ValidationError
from .lineshape import LineshapeFit, fit_lineshape
from .model import DriveTone, SystemParams

#: largest kappa_hybrid / omega_b accepted by the rotating-wave fast path
RWA_LIMIT = 0.2


@dataclass
class Spectrum:
    probe_freqs: np.ndarray
    r: np.ndarray
    params: SystemParams
    drive: DriveTone
    fixed_point: Optional[core.StateVector] = None
    rwa: bool = False
    fit: Optional[LineshapeFit] = None

    @property
    def detuning(self) -> np.ndarray:
        """Two-photon detuning ``omega_s - omega_d`` (rad/s)."""
        return self.probe_freqs - self.drive.omega_d

    @property
    def reflectance(self) -> np.ndarray:
        return np.abs(self.r) ** 2


@dataclass(frozen=True)
class WindowFit:
    center: float  # probe frequency, rad/s
    fwhm: float  # rad/s
    peak_reflectance: float
    fit: LineshapeFit


def _stable_fixed_point(params, drive, fixed_point=None):
    fp = fixed_point if fixed_point is not None else core.steady_state(params, drive)
    J = core.jacobian(params, drive, fp)
    ev = np.linalg.eigvals(J)
    worst = ev[np.argmax(ev.real)]
    if worst.real >= 0:
        raise InstabilityError("steady state is unstable", worst)
    return fp, J


def linear_response_matrix(params: SystemParams, drive: DriveTone, omega_s: float,
                           fixed_point=None):
    """``(-i nu I - J, source)`` at probe frequency ``omega_s``.

    Solving ``M x = source * s_p`` gives the fluctuation amplitudes oscillating
    as ``exp(-i nu t)``; only the photon row is fed by the probe.
    """
    _, J = _stable_fixed_point(params, drive, fixed_point)
    nu = omega_s - drive.omega_d
    source = np.zeros(6, dtype=complex)
    source[0] = math.sqrt(2 * params.kappa_e)
    return -1j * nu * np.eye(6) - J, source


def _rwa_indices(params, drive, probe_freqs):
    basis = model.hybridize(params)
    if basis.sideband_ratio(params.omega_b) >= RWA_LIMIT:
        raise ValidationError(
            f"rotating-wave path needs kappa/omega_b < {RWA_LIMIT}; "
            f"got {basis.sideband_ratio(params.omega_b):.3g}", "rwa")
    centre = float(np.median(probe_freqs))
    probe = min((model.PLUS, model.MINUS), key=lambda k: abs(basis.omega(k) - centre))
    # red-type keeps (da, dm, db); blue-type keeps (da, dm, db*)
    return [0, 1, 2] if basis.omega(probe) > drive.omega_d else [0, 1, 5]


def photon_susceptibility(J: np.ndarray, nu) -> np.ndarray:
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    n = J.shape[0]
    M = -1j * nu[:, None, None] * np.eye(n)[None] - J[None]
    rhs = np.zeros((len(nu), n, 1), dtype=complex)
    rhs[:, 0, 0] = 1.0
    return np.linalg.solve(M, rhs)[:, 0, 0]


def reflection_spectrum(params: SystemParams, drive: DriveTone, probe_freqs,
                        rwa: bool = False, fixed_point=None) -> Spectrum:
    probe_freqs = np.asarray(probe_freqs, dtype=float)
    if probe_freqs.ndim != 1 or probe_freqs.size < 1:
        raise ValidationError("probe grid must be a 1-D array", "probe_freqs")
    if np.any(np.diff(probe_freqs) <= 0):
        raise ValidationError("probe grid must be strictly increasing", "probe_freqs")
    fp, J = _stable_fixed_point(params, drive, fixed_point)
    if rwa:
        idx = _rwa_indices(params, drive, probe_freqs)
        J = J[np.ix_(idx, idx)]
    chi = photon_susceptibility(J, probe_freqs - drive.omega_d)
    r = 1.0 - 2.0 * params.kappa_e * chi
    return Spectrum(probe_freqs, r, params, drive, fp, rwa)


def bare_cavity_reflection(params: SystemParams, omega_s):
    """Single-mode reference ``1 - 2 kappa_e / (kappa_a - i(omega_s - omega_a))``."""
    return 1.0 - 2.0 * params.kappa_e / (params.kappa_a - 1j * (np.asarray(omega_s) - params.omega_a))


def on_resonance_reflectivity(C: float, kappa_e: float, kappa: float, branch: str) -> float:
    """Closed-form on-resonance reflection ``(1 +- C - 2 kappa_e/kappa)/(1 +- C)``.

    ``+`` for a red-detuned drive, ``-`` for blue.
    """
    if C < 0:
        raise ValidationError("cooperativity must be >= 0", "C")
    if branch == "red":
        d = 1.0 + C
    elif branch == "blue":
        if C >= 1.0:
            raise InstabilityError(f"blue-detuned gain diverges for C={C:.4g} >= 1")
        d = 1.0 - C
    else:
        raise ValidationError(f"branch must be 'red' or 'blue', got {branch!r}", "branch")
    return (d - 2.0 * kappa_e / kappa) / d


def phonon_pole(params: SystemParams, drive: DriveTone, fixed_point=None,
                target: Optional[float] = None):
    """(center, half width) of the phonon-like response pole on the probe axis.

    ``target`` is the expected two-photon detuning (default: the side of the
    hybrid mode nearest to ``omega_d +- omega_b``).  Returns the center as a
    probe frequency.
    """
    fp, J = _stable_fixed_point(params, drive, fixed_point)
    ev = np.linalg.eigvals(J)
    # two slowest-decaying eigenvalues are the phonon pair
    slow = ev[np.argsort(np.abs(ev.real))[:2]]
    if target is None:
        basis = model.hybridize(params)
        nearest = min((model.PLUS, model.MINUS),
                      key=lambda k: min(abs(basis.omega(k) - drive.omega_d - s * params.omega_b)
                                        for s in (1, -1)))
        target = basis.omega(nearest) - drive.omega_d
    # pole of (-i nu - lam)^-1 projects onto the real probe axis at nu = -Im(lam)
    lam = min(slow, key=lambda z: abs(-z.imag - target))
    return drive.omega_d - lam.imag, -lam.real


def window_grid(params: SystemParams, drive: DriveTone, span: float = 8.0, points: int = 801,
                fixed_point=None) -> np.ndarray:
    """Probe grid of ``points`` samples covering ``span`` pole half-widths each side."""
    center, hwhm = phonon_pole(params, drive, fixed_point)
    return center + hwhm * np.linspace(-span, span, points)


def mmit_window(params: SystemParams, drive: DriveTone, span: float = 8.0, points: int = 801,
                noise_floor: float = 1e-12, fixed_point=None) -> WindowFit:
    """Fit the narrow phonon-induced feature in ``|r|^2``.

    The grid spans ``span`` pole half-widths on each side of the phonon pole.
    """
    fp, _ = _stable_fixed_point(params, drive, fixed_point)
    grid = window_grid(params, drive, span, points, fixed_point=fp)
    center, hwhm = phonon_pole(params, drive, fp)
    spec = reflection_spectrum(params, drive, grid, fixed_point=fp)
    fit = fit_lineshape(grid, spec.reflectance, center, hwhm, noise_floor=noise_floor)
    r_center = reflection_spectrum(params, drive, [fit.center], fixed_point=fp).r[0]
    return WindowFit(fit.center, fit.fwhm, float(abs(r_center) ** 2), fit)


def window_reflection(params: SystemParams, drive: DriveTone, fixed_point=None) -> complex:
    """Complex ``r`` at the phonon pole (window center)."""
    fp, _ = _stable_fixed_point(params, drive, fixed_point)
    center, _ = phonon_pole(params, drive, fp)
    return complex(reflection_spectrum(params, drive, [center], fixed_point=fp).r[0])


def parametric_gain(params: SystemParams, drive: DriveTone) -> float:
    """Probe gain ``20 log10 |r|`` (dB) at the window center of a blue-detuned drive."""
    probe = core.stokes_mode(params, drive)
    basis = model.hybridize(params)
    if drive.omega_d <= basis.omega(probe):
        raise ValidationError("parametric gain requires a blue-detuned drive", "drive")
    r = window_reflection(params, drive)
    with np.errstate(divide="ignore"):
        return float(20 * np.log10(abs(r)))


def closed_form_gain(C: float, kappa_e_over_kappa: float) -> float:
    """Gain in dB from the closed form for a blue-detuned drive."""
    r = on_resonance_reflectivity(C, kappa_e_over_kappa, 1.0, "blue")
    with np.errstate(divide="ignore"):
        return float(20 * np.log10(abs(r)))
