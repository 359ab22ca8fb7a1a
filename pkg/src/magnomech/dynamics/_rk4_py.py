"""Pure-Python RK4 kernel; same contract as the compiled ``_rk4`` module."""
import cmath
import math

import numpy as np


def _make_rhs(coeffs, tone_amp, tone_freq):
    delta_a, delta_m, kappa_a, kappa_m, omega_b, kappa_b, g_ma, g_mb = (float(x) for x in coeffs)
    la = -(1j * delta_a + kappa_a)
    lm = -(1j * delta_m + kappa_m)
    lb = -(1j * omega_b + kappa_b)
    tones = [(complex(s), float(f)) for s, f in zip(tone_amp, tone_freq)]
    jgma = 1j * g_ma
    jgmb = 1j * g_mb

    def rhs(a, m, b, t):
        drive = 0j
        for s, f in tones:
            drive += s * cmath.exp(-1j * f * t)
        return (
            la * a - jgma * m + drive,
            lm * m - jgma * a - jgmb * (2.0 * b.real) * m,
            lb * b - jgmb * (m.real * m.real + m.imag * m.imag),
        )

    return rhs


def rk4_integrate(y0, t0, dt, n_steps, stride, coeffs, tone_amp, tone_freq):
    rhs = _make_rhs(coeffs, tone_amp, tone_freq)
    n_samples = n_steps // stride + 1
    out = np.empty((n_samples, 3), dtype=np.complex128)
    a, m, b = (complex(v) for v in y0)
    out[0] = (a, m, b)
    h2 = 0.5 * dt
    h6 = dt / 6.0
    s = 1
    n_done = n_steps
    for i in range(n_steps):
        t = t0 + i * dt
        k1 = rhs(a, m, b, t)
        k2 = rhs(a + h2 * k1[0], m + h2 * k1[1], b + h2 * k1[2], t + h2)
        k3 = rhs(a + h2 * k2[0], m + h2 * k2[1], b + h2 * k2[2], t + h2)
        k4 = rhs(a + dt * k3[0], m + dt * k3[1], b + dt * k3[2], t + dt)
        a = a + h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        m = m + h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        b = b + h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        if not all(math.isfinite(x) for x in (a.real, a.imag, m.real, m.imag, b.real, b.imag)):
            n_done = i
            break
        if (i + 1) % stride == 0:
            out[s] = (a, m, b)
            s += 1
    return out[:s], n_done
