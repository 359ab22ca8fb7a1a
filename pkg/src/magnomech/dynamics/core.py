"""Mean-field equations of motion, fixed points and linear stability.

State amplitudes live in a frame rotating at ``omega_d + frame_offset``; the
phonon amplitude is kept in the lab frame.  Fluctuation vectors are ordered
``(da, dm, db, da*, dm*, db*)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .. import model
from ..errors import ConvergenceError, DivergenceError, InstabilityError, ValidationError
from ..model import DriveTone, SystemParams
from ._kernel import rk4_integrate

STEPS_PER_PERIOD = 50


@dataclass(frozen=True)
class StateVector:
    a: complex
    m: complex
    b: complex
    t: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.m, self.b], dtype=complex)


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # (n, 3) complex: a, m, b
    params: SystemParams
    drive: DriveTone
    frame_offset: float = 0.0
    dt: float = 0.0

    @property
    def a(self):
        return self.y[:, 0]

    @property
    def m(self):
        return self.y[:, 1]

    @property
    def b(self):
        return self.y[:, 2]

    def state(self, i: int = -1) -> StateVector:
        a, m, b = self.y[i]
        return StateVector(a, m, b, float(self.t[i]))


@dataclass
class StabilityReport:
    eigenvalues: np.ndarray
    stable: bool
    threshold_power: Optional[float] = None
    predicted_C_at_threshold: Optional[float] = None
    fixed_point: Optional[StateVector] = None

    @property
    def max_real(self) -> float:
        return float(np.max(self.eigenvalues.real))


def _detunings(params: SystemParams, drive: DriveTone, frame_offset: float = 0.0):
    omega_r = drive.omega_d + frame_offset
    return params.omega_a - omega_r, params.omega_m - omega_r


def equations_of_motion(state, params: SystemParams, drive: DriveTone, t: float = 0.0,
                        frame_offset: float = 0.0) -> np.ndarray:
    """Time derivatives ``(da/dt, dm/dt, db/dt)`` of the classical amplitudes."""
    a, m, b = state.as_array() if isinstance(state, StateVector) else np.asarray(state, complex)
    delta_a, delta_m = _detunings(params, drive, frame_offset)
    s_in = math.sqrt(2 * params.kappa_e) * drive.s_in * np.exp(1j * frame_offset * t)
    return np.array([
        -(1j * delta_a + params.kappa_a) * a - 1j * params.g_ma * m + s_in,
        -(1j * delta_m + params.kappa_m) * m - 1j * params.g_ma * a
        - 1j * params.g_mb * m * (b + np.conj(b)),
        -(1j * params.omega_b + params.kappa_b) * b - 1j * params.g_mb * abs(m) ** 2,
    ])


def jacobian(params: SystemParams, drive: DriveTone, fixed_point) -> np.ndarray:
    """6x6 drift matrix of the fluctuations about ``fixed_point``.

    Keeps both the beam-splitter and the two-mode-squeezing parts of the
    linearized magnomechanical term ``g_mb m_ss (db + db*)``.
    """
    a, m, b = fixed_point.as_array() if isinstance(fixed_point, StateVector) else fixed_point
    delta_a, delta_m = _detunings(params, drive)
    ga, gb = params.g_ma, params.g_mb
    x = b + np.conj(b)
    mc = np.conj(m)
    J = np.zeros((6, 6), dtype=complex)
    J[0, 0] = -(1j * delta_a + params.kappa_a)
    J[0, 1] = -1j * ga
    J[1, 0] = -1j * ga
    J[1, 1] = -(1j * delta_m + params.kappa_m) - 1j * gb * x
    J[1, 2] = J[1, 5] = -1j * gb * m
    J[2, 1] = -1j * gb * mc
    J[2, 4] = -1j * gb * m
    J[2, 2] = -(1j * params.omega_b + params.kappa_b)
    # conjugate rows: J[i+3, j+3] = conj J[i, j], J[i+3, j] = conj J[i, j+3]
    J[3:, 3:] = np.conj(J[:3, :3])
    J[3:, :3] = np.conj(J[:3, 3:])
    return J


def _residual(z, params, delta_a, delta_m, src):
    a, m, b = z
    x = 2 * b.real
    terms = (
        (-(1j * delta_a + params.kappa_a) * a, -1j * params.g_ma * m, src),
        (-(1j * delta_m + params.kappa_m) * m, -1j * params.g_ma * a, -1j * params.g_mb * x * m),
        (-(1j * params.omega_b + params.kappa_b) * b, -1j * params.g_mb * abs(m) ** 2 + 0j, 0j),
    )
    F = np.array([sum(row) for row in terms])
    scale = np.array([sum(abs(t) for t in row) for row in terms])
    return F, scale


def linear_guess(params: SystemParams, drive: DriveTone) -> StateVector:
    """Fixed point of the photon-magnon sector with the phonon feedback dropped."""
    delta_a, delta_m = _detunings(params, drive)
    src = math.sqrt(2 * params.kappa_e) * drive.s_in
    M = np.array([[1j * delta_a + params.kappa_a, 1j * params.g_ma],
                  [1j * params.g_ma, 1j * delta_m + params.kappa_m]])
    a, m = np.linalg.solve(M, [src, 0.0])
    b = -1j * params.g_mb * abs(m) ** 2 / (params.kappa_b + 1j * params.omega_b)
    return StateVector(a, m, b)


def steady_state(params: SystemParams, drive: DriveTone, tol: float = 1e-12,
                 max_iter: int = 100, initial: Optional[StateVector] = None) -> StateVector:
    """Newton iteration on the algebraic fixed-point equations.

    Convergence is judged on the residual of each equation relative to the
    sum of the magnitudes of its terms.
    """
    delta_a, delta_m = _detunings(params, drive)
    src = math.sqrt(2 * params.kappa_e) * drive.s_in
    guess = initial if initial is not None else linear_guess(params, drive)
    z = guess.as_array()
    rel = np.inf
    for _ in range(max_iter):
        F, scale = _residual(z, params, delta_a, delta_m, src)
        nz = scale > 0
        rel = float(np.max(np.abs(F[nz]) / scale[nz])) if nz.any() else 0.0
        if rel < tol:
            return StateVector(*z)
        J = jacobian(params, drive, z)
        step = np.linalg.solve(J, -np.concatenate([F, np.conj(F)]))
        z = z + step[:3]
    raise ConvergenceError(
        f"steady state did not converge in {max_iter} iterations (residual {rel:.3g})", rel
    )


def eigenvalues(params: SystemParams, drive: DriveTone, fixed_point=None) -> np.ndarray:
    if fixed_point is None:
        fixed_point = steady_state(params, drive)
    return np.linalg.eigvals(jacobian(params, drive, fixed_point))


def max_growth_rate(params: SystemParams, drive: DriveTone) -> float:
    return float(np.max(eigenvalues(params, drive).real))


def stokes_mode(params: SystemParams, drive: DriveTone) -> int:
    """Hybrid mode closest to the Stokes frequency ``omega_d - omega_b``."""
    basis = model.hybridize(params)
    target = drive.omega_d - params.omega_b
    return min((model.PLUS, model.MINUS), key=lambda k: abs(basis.omega(k) - target))


def instability_threshold(params: SystemParams, drive: DriveTone, rtol: float = 1e-3,
                          p_max: float = 1e3) -> float:
    """Drive power (W) at which the largest eigenvalue real part crosses zero.

    The drive frequency is held fixed; bisection is done in log-power.
    """
    probe = stokes_mode(params, drive)
    c_per_watt = model.probe_cooperativity(params, drive.with_power(1e-3), probe) / 1e-3
    if c_per_watt <= 0:
        raise InstabilityError("drive does not couple to the phonon; no threshold")
    guess = 1.0 / c_per_watt

    def unstable(p):
        return max_growth_rate(params, drive.with_power(p)) > 0

    lo, hi = 0.5 * guess, 2.0 * guess
    while unstable(lo):
        lo *= 0.5
        if lo < 1e-30:
            raise InstabilityError("unstable at vanishing drive power")
    while not unstable(hi):
        hi *= 2.0
        if hi > p_max:
            raise InstabilityError(f"no instability found below {p_max} W")
    while hi / lo - 1 > rtol:
        mid = math.sqrt(lo * hi)
        if unstable(mid):
            hi = mid
        else:
            lo = mid
    return math.sqrt(lo * hi)


def stability_analysis(params: SystemParams, drive: DriveTone,
                       threshold: Optional[bool] = None) -> StabilityReport:
    """Jacobian spectrum at the fixed point; optional threshold search.

    ``threshold=None`` searches only when the drive sits above the Stokes
    hybrid mode (blue-type configuration).
    """
    fp = steady_state(params, drive)
    ev = np.linalg.eigvals(jacobian(params, drive, fp))
    report = StabilityReport(ev, bool(np.all(ev.real < 0)), fixed_point=fp)
    probe = stokes_mode(params, drive)
    basis = model.hybridize(params)
    blue_type = drive.omega_d > basis.omega(probe)
    if threshold is None:
        threshold = blue_type
    if threshold:
        if not blue_type:
            raise ValidationError("threshold search requires a blue-detuned drive", "drive")
        p_th = instability_threshold(params, drive)
        report.threshold_power = p_th
        report.predicted_C_at_threshold = model.probe_cooperativity(
            params, drive.with_power(p_th), probe
        )
    return report


def max_stable_dt(params: SystemParams, drive: DriveTone, frame_offset: float = 0.0) -> float:
    delta_a, delta_m = _detunings(params, drive, frame_offset)
    fastest = max(params.omega_b, abs(delta_a), abs(delta_m), params.g_ma)
    return 2 * math.pi / (STEPS_PER_PERIOD * fastest)


def integrate(params: SystemParams, drive: DriveTone, initial=None,
              t_span: Sequence[float] = (0.0, 1e-6), dt: Optional[float] = None,
              stride: int = 1, probe: Optional[tuple] = None,
              frame_offset: float = 0.0) -> Trajectory:
    """Fixed-step RK4 integration of the nonlinear equations.

    ``probe`` is an optional ``(omega_s, s_p)`` weak tone added to the
    drive.  Raises :class:`DivergenceError` on a non-finite state.
    """
    t0, t1 = map(float, t_span)
    if t1 <= t0:
        raise ValidationError("t_span must be increasing", "t_span")
    dt_max = max_stable_dt(params, drive, frame_offset)
    if dt is None:
        dt = dt_max
    elif dt > dt_max * (1 + 1e-12):
        raise ValidationError(f"dt={dt:.3g} s exceeds resolution limit {dt_max:.3g} s", "dt")
    n_steps = int(round((t1 - t0) / dt))
    stride = max(1, int(stride))
    if initial is None:
        y0 = np.zeros(3, dtype=complex)
    elif isinstance(initial, StateVector):
        y0 = initial.as_array()
    else:
        y0 = np.asarray(initial, dtype=complex)

    delta_a, delta_m = _detunings(params, drive, frame_offset)
    coeffs = np.array([delta_a, delta_m, params.kappa_a, params.kappa_m, params.omega_b,
                       params.kappa_b, params.g_ma, params.g_mb])
    gain = math.sqrt(2 * params.kappa_e)
    omega_r = drive.omega_d + frame_offset
    amps = [gain * drive.s_in]
    freqs = [drive.omega_d - omega_r]
    if probe is not None:
        omega_s, s_p = probe
        amps.append(gain * s_p)
        freqs.append(omega_s - omega_r)
    y, n_done = rk4_integrate(y0, t0, dt, n_steps, stride, coeffs,
                              np.array(amps, dtype=complex), np.array(freqs, dtype=float))
    if n_done < n_steps:
        raise DivergenceError(f"non-finite state at t={t0 + (n_done + 1) * dt:.6g} s",
                              t0 + (n_done + 1) * dt)
    t = t0 + dt * stride * np.arange(len(y))
    return Trajectory(t, y, params, drive, frame_offset, dt)


def time_domain_reflection(params: SystemParams, drive: DriveTone, omega_s: float,
                           probe_ratio: float = 1e-4, settle: float = 5e-3,
                           window: float = 5e-3, dt: Optional[float] = None) -> complex:
    """Weak-probe reflection coefficient measured from a simulated trajectory.

    Starts at the fixed point, switches on a probe of amplitude
    ``probe_ratio * s_in`` and lock-in demodulates the output over an integer
    number of beat periods after ``settle`` seconds.
    """
    fp = steady_state(params, drive)
    s_p = probe_ratio * drive.s_in
    nu = omega_s - drive.omega_d
    if nu == 0:
        raise ValidationError("probe must be detuned from the drive", "omega_s")
    if dt is None:
        # RK4 phase error at the coarse bound detunes the lab-frame phonon by ~2e-6 omega_b
        dt = max_stable_dt(params, drive) / 4
    traj = integrate(params, drive, initial=fp, t_span=(0.0, settle + window), dt=dt,
                     probe=(omega_s, s_p))
    step = traj.t[1] - traj.t[0]
    period = 2 * math.pi / abs(nu)
    n = int(round(math.floor(window / period) * period / step))
    t = traj.t[-n:]
    da = traj.a[-n:] - fp.a
    a_nu = np.mean(da * np.exp(1j * nu * t))
    return complex(1.0 - math.sqrt(2 * params.kappa_e) * a_nu / s_p)
