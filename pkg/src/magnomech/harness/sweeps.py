"""Parameter sweeps over bias field, drive power, drive detuning and probe grid.

Points are independent, so they may be farmed out to worker processes; the
output order always follows the sweep axis.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .. import model, spectrum
from ..dynamics import core
from ..errors import FitError, InstabilityError, MagnomechError, ValidationError
from ..model import DriveTone, SystemParams
from ..units import TWO_PI, dbm_to_watts, watts_to_dbm

AXES = ("bias_field", "drive_power", "drive_detuning", "probe_grid")


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep.

    Axis units: ``bias_field`` in tesla, ``drive_power`` in dBm (nominal, the
    calibration ``power_scale`` is applied on top), ``drive_detuning`` in Hz
    relative to the locked drive, ``probe_grid`` in Hz (absolute probe
    frequency).
    """

    axis: str
    start: float
    stop: float
    points: int
    params: SystemParams
    power: float  # nominal drive power, W
    branch: str = "red"
    scale: str = "linear"
    detuning_rule: str = "lock"
    omega_d: Optional[float] = None  # rad/s, used by detuning_rule="fixed"
    power_scale: float = 1.0
    branches: tuple = ("red", "blue")

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValidationError(f"unknown axis {self.axis!r}", "sweep.axis")
        if not isinstance(self.points, (int, np.integer)) or self.points < 2:
            raise ValidationError("need at least 2 points", "sweep.points")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValidationError("range bounds must be finite", "sweep.start")
        if self.scale not in ("linear", "log"):
            raise ValidationError("scale must be linear or log", "sweep.scale")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ValidationError("log scale needs positive bounds", "sweep.start")
        if self.detuning_rule not in ("lock", "fixed"):
            raise ValidationError("detuning_rule must be lock or fixed", "sweep.detuning_rule")
        if self.detuning_rule == "fixed":
            if self.omega_d is None:
                raise ValidationError("fixed detuning rule needs a drive frequency", "drive.frequency")
            if self.axis == "drive_detuning":
                raise ValidationError("drive_detuning axis requires the lock rule", "sweep.detuning_rule")
        if self.branch not in ("red", "blue"):
            raise ValidationError("branch must be red or blue", "drive.branch")
        if self.power < 0 or self.power_scale <= 0:
            raise ValidationError("drive power must be >= 0 and scale > 0", "drive.power_dbm")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


def _map(fn: Callable, items: Sequence, workers: int = 1) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map yields in submission order whatever the completion order
        return list(pool.map(fn, items))


# -- cooperativity versus bias field -----------------------------------------

@dataclass(frozen=True)
class FieldPoint:
    field: float  # T
    params: SystemParams
    C_minus: float
    C_plus: float
    f_drive_minus: float  # Hz
    f_drive_plus: float  # Hz
    error: Optional[str] = None


def _drives_at(params: SystemParams, spec: SweepSpec, power: float):
    if spec.detuning_rule == "lock":
        # red sideband of A_minus, blue sideband of A_plus
        return (model.locked_drive(params, model.MINUS, "red", power),
                model.locked_drive(params, model.PLUS, "blue", power))
    tone = DriveTone(spec.omega_d, power)
    return tone, tone


def _field_point(args) -> FieldPoint:
    spec, H = args
    try:
        params = spec.params.at_field(float(H))
        power = spec.power * spec.power_scale
        d_minus, d_plus = _drives_at(params, spec, power)
        return FieldPoint(
            float(H), params,
            model.probe_cooperativity(params, d_minus, model.MINUS),
            model.probe_cooperativity(params, d_plus, model.PLUS),
            d_minus.omega_d / TWO_PI, d_plus.omega_d / TWO_PI,
        )
    except MagnomechError as exc:
        nan = float("nan")
        return FieldPoint(float(H), spec.params, nan, nan, nan, nan, f"{type(exc).__name__}: {exc}")


def sweep_cooperativity_vs_field(spec: SweepSpec, workers: int = 1) -> list:
    """``C`` of both hybrid modes at each bias field.

    With the lock rule, ``C_minus`` uses a drive one phonon frequency below
    ``A_minus`` and ``C_plus`` a drive one phonon frequency above ``A_plus``.
    With the fixed rule both use the same drive tone.  Failed points carry
    an ``error`` string and NaN values.
    """
    if spec.axis != "bias_field":
        raise ValidationError("cooperativity sweep needs the bias_field axis", "sweep.axis")
    return _map(_field_point, [(spec, H) for H in spec.values()], workers)


# -- drive power: window linewidth and on-resonance reflectivity --------------

@dataclass(frozen=True)
class PowerPoint:
    branch: str
    power_dbm: float  # nominal
    power: float  # W at the device
    cooperativity: float
    fwhm_fit: float  # Hz, nan if no fit
    fwhm_pole: float  # Hz
    center: float  # Hz
    reflectance: float  # |r|^2 at the window center
    reflectance_closed: float  # closed form with the same C
    status: str = "ok"


def power_point(params: SystemParams, branch: str, power: float, power_dbm: float = float("nan"),
                fit: bool = True) -> PowerPoint:
    """Window and reflectivity at one device power for the triple-resonance drive."""
    probe, drive = model.triple_resonance_drive(params, branch, power)
    basis = model.hybridize(params)
    C = model.probe_cooperativity(params, drive, probe)
    nan = float("nan")
    closed = nan
    try:
        closed = spectrum.on_resonance_reflectivity(C, basis.kappa_e(probe), basis.kappa(probe),
                                                    branch) ** 2
    except InstabilityError:
        pass
    try:
        fp = core.steady_state(params, drive)
        center, hwhm = spectrum.phonon_pole(params, drive, fp)
        r = spectrum.reflection_spectrum(params, drive, [center], fixed_point=fp).r[0]
    except InstabilityError:
        return PowerPoint(branch, power_dbm, power, C, nan, nan, nan, nan, closed, "unstable")
    fwhm_fit, status = nan, "ok"
    if fit and power > 0:
        try:
            win = spectrum.mmit_window(params, drive, fixed_point=fp)
            fwhm_fit, center = win.fwhm, win.center
            r = spectrum.reflection_spectrum(params, drive, [center], fixed_point=fp).r[0]
        except FitError as exc:
            status = f"fit-failed: {exc}"
    return PowerPoint(branch, power_dbm, power, C, fwhm_fit / TWO_PI, 2 * hwhm / TWO_PI,
                      center / TWO_PI, float(abs(r) ** 2), closed, status)


def _power_task(args) -> PowerPoint:
    params, branch, power, dbm = args
    return power_point(params, branch, power, dbm)


def _power_sweep(spec: SweepSpec, workers: int) -> list:
    if spec.axis != "drive_power":
        raise ValidationError("power sweep needs the drive_power axis", "sweep.axis")
    rows = []
    for branch in spec.branches:
        dbms = spec.values()
        tasks = [(spec.params, branch, float(dbm_to_watts(p)) * spec.power_scale, float(p))
                 for p in dbms]
        results = _map(_power_task, tasks, workers)
        for res in results:
            rows.append(res)
            # blue branch stops at the first unstable point
            if res.status == "unstable":
                break
    return rows


def sweep_linewidth_vs_power(spec: SweepSpec, workers: int = 1) -> list:
    """Window FWHM and center versus drive power for each branch.

    Red broadens and blue narrows; the blue branch ends with an ``unstable``
    record once the fixed point loses stability.
    """
    return _power_sweep(spec, workers)


@dataclass(frozen=True)
class ThresholdMark:
    power: float  # W at the device, eigenvalue threshold
    power_dbm_nominal: float
    cooperativity: float  # C at that power
    power_at_C1: float  # W where the closed-form pole sits


def blue_threshold(params: SystemParams, power_scale: float = 1.0) -> ThresholdMark:
    probe, drive = model.triple_resonance_drive(params, "blue", 1e-3)
    report = core.stability_analysis(params, drive, threshold=True)
    c_per_watt = model.probe_cooperativity(params, drive, probe) / 1e-3
    p = report.threshold_power
    return ThresholdMark(p, float(watts_to_dbm(p / power_scale)),
                         report.predicted_C_at_threshold, 1.0 / c_per_watt)


def reproduce_fig4d(spec: SweepSpec, workers: int = 1):
    """On-resonance reflectivity versus power for both branches plus the blue threshold."""
    return _power_sweep(spec, workers), blue_threshold(spec.params, spec.power_scale)


# -- drive detuning: lineshape transitions ------------------------------------

@dataclass(frozen=True)
class DetuningPoint:
    offset: float  # Hz from the locked drive
    branch: str
    fano_q: float
    kind: str
    center: float  # Hz
    fwhm: float  # Hz
    status: str = "ok"


def _detuning_task(args) -> DetuningPoint:
    params, branch, power, offset = args
    probe = model.MINUS if branch == "red" else model.PLUS
    lock = model.locked_drive(params, probe, branch, power)
    drive = DriveTone(lock.omega_d + TWO_PI * offset, power)
    nan = float("nan")
    try:
        win = spectrum.mmit_window(params, drive)
    except (InstabilityError, FitError) as exc:
        return DetuningPoint(offset, branch, nan, "none", nan, nan, f"{type(exc).__name__}: {exc}")
    return DetuningPoint(offset, branch, win.fit.fano_q, win.fit.kind, win.center / TWO_PI,
                         win.fwhm / TWO_PI)


def sweep_drive_detuning(spec: SweepSpec, workers: int = 1) -> list:
    """Fitted window lineshape versus drive offset from ``omega_pm -+ omega_b``.

    Red drives sit below ``A_minus``, blue drives above ``A_plus``.
    """
    if spec.axis != "drive_detuning":
        raise ValidationError("detuning sweep needs the drive_detuning axis", "sweep.axis")
    power = spec.power * spec.power_scale
    tasks = [(spec.params, b, power, float(x)) for b in spec.branches for x in spec.values()]
    return _map(_detuning_task, tasks, workers)


# -- probe grid ---------------------------------------------------------------

def sweep_probe_grid(spec: SweepSpec, drive: DriveTone) -> spectrum.Spectrum:
    if spec.axis != "probe_grid":
        raise ValidationError("probe sweep needs the probe_grid axis", "sweep.axis")
    return spectrum.reflection_spectrum(spec.params, drive, TWO_PI * spec.values())
