# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled fixed-step RK4 kernel for the three-mode mean-field equations."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, isfinite

cnp.import_array()


cdef inline void _rhs(double complex a, double complex m, double complex b, double t,
                      double[::1] c, double complex[::1] tone_amp, double[::1] tone_freq,
                      double complex* out) noexcept nogil:
    # c = (delta_a, delta_m, kappa_a, kappa_m, omega_b, kappa_b, g_ma, g_mb)
    cdef double complex drive = 0
    cdef Py_ssize_t k
    cdef double ph
    for k in range(tone_amp.shape[0]):
        ph = tone_freq[k] * t
        drive = drive + tone_amp[k] * (cos(ph) - 1j * sin(ph))
    cdef double x = 2.0 * b.real
    cdef double mm = m.real * m.real + m.imag * m.imag
    out[0] = -(1j * c[0] + c[2]) * a - 1j * c[6] * m + drive
    out[1] = -(1j * c[1] + c[3]) * m - 1j * c[6] * a - 1j * c[7] * x * m
    out[2] = -(1j * c[4] + c[5]) * b - 1j * c[7] * mm


def rk4_integrate(y0, double t0, double dt, Py_ssize_t n_steps, Py_ssize_t stride,
                  coeffs, tone_amp, tone_freq):
    """Integrate ``n_steps`` RK4 steps, storing every ``stride``-th state.

    Returns ``(samples, n_done)``; ``n_done < n_steps`` signals a non-finite
    state at step ``n_done + 1``.
    """
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double complex[::1] amp = np.ascontiguousarray(tone_amp, dtype=np.complex128)
    cdef double[::1] freq = np.ascontiguousarray(tone_freq, dtype=np.float64)
    cdef Py_ssize_t n_samples = n_steps // stride + 1
    out_arr = np.empty((n_samples, 3), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex y[3]
    cdef double complex k1[3]
    cdef double complex k2[3]
    cdef double complex k3[3]
    cdef double complex k4[3]
    cdef Py_ssize_t i, j, s = 1
    cdef double t
    cdef double h2 = 0.5 * dt
    cdef double h6 = dt / 6.0
    cdef Py_ssize_t n_done = n_steps
    for j in range(3):
        y[j] = y0[j]
        out[0, j] = y[j]
    with nogil:
        for i in range(n_steps):
            t = t0 + i * dt
            _rhs(y[0], y[1], y[2], t, c, amp, freq, k1)
            _rhs(y[0] + h2 * k1[0], y[1] + h2 * k1[1], y[2] + h2 * k1[2], t + h2,
                 c, amp, freq, k2)
            _rhs(y[0] + h2 * k2[0], y[1] + h2 * k2[1], y[2] + h2 * k2[2], t + h2,
                 c, amp, freq, k3)
            _rhs(y[0] + dt * k3[0], y[1] + dt * k3[1], y[2] + dt * k3[2], t + dt,
                 c, amp, freq, k4)
            for j in range(3):
                y[j] = y[j] + h6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            if not (isfinite(y[0].real) and isfinite(y[0].imag) and isfinite(y[1].real)
                    and isfinite(y[1].imag) and isfinite(y[2].real) and isfinite(y[2].imag)):
                n_done = i
                break
            if (i + 1) % stride == 0:
                for j in range(3):
                    out[s, j] = y[j]
                s += 1
    return out_arr[:s], n_done
