"""Mode parameters, photon-magnon hybridization and drive enhancement.

All frequencies and rates are angular (rad/s).  Every damping rate is a
half-width at half maximum, so a quoted linewidth ``2*kappa/2pi`` in Hz maps
to ``kappa = pi * linewidth``.

Hybrid modes are defined as::

    A_plus  =  cos(theta) a + sin(theta) m
    A_minus = -sin(theta) a + cos(theta) m

with ``A_plus`` always the upper-frequency branch.  The magnon weight of
``A_plus`` is ``sin^2 theta = (1 - cos 2theta)/2`` and that of ``A_minus`` is
``cos^2 theta = (1 + cos 2theta)/2``.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .units import TWO_PI, photon_flux

#: Gyromagnetic ratio of YIG, gamma/2pi = 28 GHz/T.
GAMMA_YIG = TWO_PI * 28e9

PLUS = +1
MINUS = -1


def _mode(mode) -> int:
    if mode in (PLUS, "+", "plus"):
        return PLUS
    if mode in (MINUS, "-", "minus"):
        return MINUS
    raise ValidationError(f"unknown hybrid mode {mode!r}; use +1/-1", "mode")


@dataclass(frozen=True)
class SystemParams:
    """Cavity, magnon and phonon parameters in angular units."""

    omega_a: float
    kappa_a: float
    kappa_e: float
    omega_m: float
    kappa_m: float
    omega_b: float
    kappa_b: float
    g_ma: float
    g_mb: float
    gamma_gyro: float = GAMMA_YIG

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise ValidationError(f"expected a real number, got {value!r}", f.name)
            if not math.isfinite(value):
                raise ValidationError("must be finite", f.name)
            # g_mb and g_ma may be switched off for reference calculations
            if f.name in ("g_mb", "g_ma"):
                if value < 0:
                    raise ValidationError("must be non-negative", f.name)
            elif value <= 0:
                raise ValidationError("must be strictly positive", f.name)
        if self.kappa_e > self.kappa_a:
            raise ValidationError("external coupling exceeds total cavity loss", "kappa_e")

    @classmethod
    def reference_device(cls, **overrides) -> "SystemParams":
        """Defaults of the 250 um YIG sphere device at triple resonance.

        Magnon tuned onto the cavity and ``2 g_ma = omega_b``; ``kappa_e`` is
        taken as ``kappa_a / 2`` since the device value is unknown.
        """
        omega_a = TWO_PI * 7.86e9
        kappa_a = math.pi * 3.35e6
        omega_b = TWO_PI * 11.42e6
        values = dict(
            omega_a=omega_a,
            kappa_a=kappa_a,
            kappa_e=kappa_a / 2,
            omega_m=omega_a,
            kappa_m=math.pi * 1.12e6,
            omega_b=omega_b,
            kappa_b=math.pi * 300.0,
            g_ma=omega_b / 2,
            g_mb=TWO_PI * 4.1e-3,
            gamma_gyro=GAMMA_YIG,
        )
        values.update(overrides)
        return cls(**values)

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @property
    def delta_ma(self) -> float:
        return self.omega_m - self.omega_a

    def at_field(self, field: float) -> "SystemParams":
        """Copy with the magnon frequency set by bias field ``field`` (tesla)."""
        return self.replace(omega_m=magnon_frequency(field, self.gamma_gyro))

    def triple_resonance(self) -> "SystemParams":
        """Copy tuned so the hybrid splitting at zero detuning equals omega_b."""
        return self.replace(omega_m=self.omega_a, g_ma=self.omega_b / 2)


@dataclass(frozen=True)
class DriveTone:
    omega_d: float
    power: float

    def __post_init__(self):
        if not math.isfinite(self.omega_d) or self.omega_d <= 0:
            raise ValidationError("drive frequency must be positive", "omega_d")
        if not math.isfinite(self.power) or self.power < 0:
            raise ValidationError("drive power must be >= 0", "power")

    @property
    def flux(self) -> float:
        return float(photon_flux(self.power, self.omega_d))

    @property
    def s_in(self) -> float:
        """Input field amplitude sqrt(photons/s), drive phase zero."""
        return math.sqrt(self.flux)

    def with_power(self, power: float) -> "DriveTone":
        return DriveTone(self.omega_d, power)


@dataclass(frozen=True)
class HybridBasis:
    theta: float
    omega_plus: float
    omega_minus: float
    kappa_plus: float
    kappa_minus: float
    kappa_e_plus: float
    kappa_e_minus: float

    def omega(self, mode) -> float:
        return self.omega_plus if _mode(mode) == PLUS else self.omega_minus

    def kappa(self, mode) -> float:
        return self.kappa_plus if _mode(mode) == PLUS else self.kappa_minus

    def kappa_e(self, mode) -> float:
        return self.kappa_e_plus if _mode(mode) == PLUS else self.kappa_e_minus

    def photon_amplitude(self, mode) -> float:
        """Coefficient of ``a`` in the hybrid operator."""
        return math.cos(self.theta) if _mode(mode) == PLUS else -math.sin(self.theta)

    def magnon_amplitude(self, mode) -> float:
        """Coefficient of ``m`` in the hybrid operator."""
        return math.sin(self.theta) if _mode(mode) == PLUS else math.cos(self.theta)

    def magnon_weight(self, mode) -> float:
        c2 = math.cos(2 * self.theta)
        return (1 - c2) / 2 if _mode(mode) == PLUS else (1 + c2) / 2

    @property
    def splitting(self) -> float:
        return self.omega_plus - self.omega_minus

    def sideband_ratio(self, omega_b: float) -> float:
        """Largest hybrid half-linewidth over the phonon frequency."""
        return max(self.kappa_plus, self.kappa_minus) / omega_b

    def resolved_sideband(self, omega_b: float, limit: float = 1.0) -> bool:
        return self.sideband_ratio(omega_b) < limit


@dataclass(frozen=True)
class DriveResponse:
    amp_plus: complex
    amp_minus: complex
    G_plus: Optional[float] = None
    G_minus: Optional[float] = None
    C_plus: Optional[float] = None
    C_minus: Optional[float] = None

    def amp(self, mode) -> complex:
        return self.amp_plus if _mode(mode) == PLUS else self.amp_minus

    def G(self, mode) -> Optional[float]:
        return self.G_plus if _mode(mode) == PLUS else self.G_minus

    def C(self, mode) -> Optional[float]:
        return self.C_plus if _mode(mode) == PLUS else self.C_minus


def magnon_frequency(field: float, gamma_gyro: float = GAMMA_YIG) -> float:
    """Kittel-mode frequency ``gamma * H`` of a sphere in bias field ``field`` (T)."""
    if not np.all(np.isfinite(field)) or np.any(np.asarray(field) <= 0):
        raise ValidationError("bias field must be positive", "field")
    if gamma_gyro <= 0:
        raise ValidationError("gyromagnetic ratio must be positive", "gamma_gyro")
    return gamma_gyro * field


def field_for_frequency(omega_m: float, gamma_gyro: float = GAMMA_YIG) -> float:
    if omega_m <= 0:
        raise ValidationError("magnon frequency must be positive", "omega_m")
    return omega_m / gamma_gyro


def hybridization_angle(g_ma: float, delta_ma: float) -> float:
    """Mixing angle in (0, pi/2) with ``A_plus`` on the upper branch.

    Equals pi/4 on resonance, tends to 0 when the magnon sits far below the
    cavity (upper branch photon-like) and to pi/2 far above it.
    """
    return 0.5 * math.atan2(2 * g_ma, -delta_ma)


def hybridize(params: SystemParams) -> HybridBasis:
    if params.g_ma <= 0:
        raise ValidationError("hybridization needs g_ma > 0", "g_ma")
    delta = params.delta_ma
    theta = hybridization_angle(params.g_ma, delta)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    mean = 0.5 * (params.omega_a + params.omega_m)
    half = math.sqrt(params.g_ma**2 + 0.25 * delta**2)
    return HybridBasis(
        theta=theta,
        omega_plus=mean + half,
        omega_minus=mean - half,
        kappa_plus=params.kappa_a * c2 + params.kappa_m * s2,
        kappa_minus=params.kappa_a * s2 + params.kappa_m * c2,
        kappa_e_plus=params.kappa_e * c2,
        kappa_e_minus=params.kappa_e * s2,
    )


def _hybrid_amplitude(basis: HybridBasis, mode, drive: DriveTone, kappa_e: float) -> complex:
    # coupling of the hybrid mode to the feed line: sqrt(2 kappa_e) times its photon content
    coupling = math.sqrt(2 * kappa_e) * basis.photon_amplitude(mode)
    detuning = basis.omega(mode) - drive.omega_d
    return coupling * drive.s_in / (basis.kappa(mode) + 1j * detuning)


def steady_state_amplitude(
    params: SystemParams, basis: HybridBasis, drive: DriveTone
) -> DriveResponse:
    """Linear steady-state hybrid amplitudes in the frame rotating at the drive.

    ``|A|^2 = 2 kappa_e,pm |s_in|^2 / (kappa_pm^2 + (omega_pm - omega_d)^2)``.
    """
    return DriveResponse(
        amp_plus=_hybrid_amplitude(basis, PLUS, drive, params.kappa_e),
        amp_minus=_hybrid_amplitude(basis, MINUS, drive, params.kappa_e),
    )


def enhanced_coupling(
    response: DriveResponse, basis: HybridBasis, params: SystemParams
) -> DriveResponse:
    """Fill in ``G_pm = |A_pm| g_mb (1 -+ cos 2theta)/2`` and ``C = G^2/(kappa kappa_b)``."""
    G_plus = abs(response.amp_plus) * params.g_mb * basis.magnon_weight(PLUS)
    G_minus = abs(response.amp_minus) * params.g_mb * basis.magnon_weight(MINUS)
    return dataclasses.replace(
        response,
        G_plus=G_plus,
        G_minus=G_minus,
        C_plus=G_plus**2 / (basis.kappa_plus * params.kappa_b),
        C_minus=G_minus**2 / (basis.kappa_minus * params.kappa_b),
    )


def drive_response(params: SystemParams, drive: DriveTone) -> DriveResponse:
    basis = hybridize(params)
    return enhanced_coupling(steady_state_amplitude(params, basis, drive), basis, params)


def magnon_steady_state(basis: HybridBasis, response: DriveResponse) -> complex:
    """Magnon amplitude reconstructed from both hybrid amplitudes."""
    return (
        basis.magnon_amplitude(PLUS) * response.amp_plus
        + basis.magnon_amplitude(MINUS) * response.amp_minus
    )


def probe_coupling(params: SystemParams, drive: DriveTone, probe) -> float:
    """Linearized coupling between the probed hybrid mode and the phonon.

    Uses the full magnon steady state, so it covers both the single-mode
    (drive near the probed mode) and the triple-resonance (drive on the other
    hybrid mode) geometries.
    """
    basis = hybridize(params)
    response = steady_state_amplitude(params, basis, drive)
    m_ss = magnon_steady_state(basis, response)
    return params.g_mb * abs(basis.magnon_amplitude(probe) * m_ss)


def probe_cooperativity(params: SystemParams, drive: DriveTone, probe) -> float:
    basis = hybridize(params)
    G = probe_coupling(params, drive, probe)
    return G**2 / (basis.kappa(probe) * params.kappa_b)


def locked_drive(params: SystemParams, probe, branch: str, power: float) -> DriveTone:
    """Drive tone placed one phonon frequency below (red) or above (blue) ``probe``.

    For a triple-resonance device this puts the drive on the other hybrid
    mode; otherwise it is the single-mode sideband drive.
    """
    basis = hybridize(params)
    if branch == "red":
        omega_d = basis.omega(probe) - params.omega_b
    elif branch == "blue":
        omega_d = basis.omega(probe) + params.omega_b
    else:
        raise ValidationError(f"branch must be 'red' or 'blue', got {branch!r}", "branch")
    return DriveTone(omega_d, power)


def triple_resonance_drive(params: SystemParams, branch: str, power: float):
    """(probe mode, drive) for the triple-resonance red/blue configurations.

    Red drives the lower hybrid mode and probes the upper one; blue drives
    the upper mode and probes the lower one.
    """
    probe = PLUS if branch == "red" else MINUS
    return probe, locked_drive(params, probe, branch, power)
