"""Spheroidal eigenmodes of a traction-free homogeneous elastic sphere.

The displacement is built from a longitudinal potential ``j_l(h r) Y_lm`` and
a poloidal shear potential ``j_l(k r) Y_lm``; vanishing radial and shear
tractions at the surface give a 2x2 determinant in the dimensionless
transverse wavenumber ``eta = k a`` (``xi = h a = eta v_T / v_L``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq
from scipy.special import spherical_jn

from .errors import RootBracketError, ValidationError
from .units import TWO_PI

#: YIG defaults (room temperature, literature values)
YIG_DENSITY = 5170.0
YIG_V_LONGITUDINAL = 7209.0
YIG_V_TRANSVERSE = 3843.0

#: calibration anchor: S_{1,2} at 11.42 MHz for a 250 um sphere
ANCHOR_DIAMETER = 250e-6
ANCHOR_FREQUENCY = 11.42e6

#: coupling anchor g_mb/2pi = 4.1 mHz at 250 um, theoretical ceiling 9.9 mHz
COUPLING_ANCHOR = TWO_PI * 4.1e-3
COUPLING_CEILING = TWO_PI * 9.9e-3


@dataclass(frozen=True)
class ElasticSphere:
    diameter: float
    density: float = YIG_DENSITY
    v_longitudinal: float = YIG_V_LONGITUDINAL
    v_transverse: float = YIG_V_TRANSVERSE

    def __post_init__(self):
        for name in ("diameter", "density", "v_longitudinal", "v_transverse"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError("must be positive", name)
        if self.v_longitudinal <= self.v_transverse:
            raise ValidationError("longitudinal velocity must exceed transverse", "v_longitudinal")

    @property
    def radius(self) -> float:
        return 0.5 * self.diameter

    @property
    def velocity_ratio(self) -> float:
        return self.v_transverse / self.v_longitudinal

    def with_diameter(self, diameter: float) -> "ElasticSphere":
        return replace(self, diameter=diameter)

    def scaled_velocities(self, factor: float) -> "ElasticSphere":
        return replace(self, v_longitudinal=self.v_longitudinal * factor,
                       v_transverse=self.v_transverse * factor)


@dataclass(frozen=True)
class SpheroidalMode:
    n: int
    l: int
    m_a: int
    frequency: float  # Hz


def _jn_derivs(l, x):
    j = spherical_jn(l, x)
    dj = spherical_jn(l, x, derivative=True)
    # spherical Bessel equation
    d2j = -2.0 / x * dj - (1.0 - l * (l + 1) / x**2) * j
    return j, dj, d2j


def characteristic(eta, l: int, velocity_ratio: float):
    """Traction determinant at unit radius for transverse wavenumber ``eta``.

    ``velocity_ratio`` is ``v_T / v_L``.  Roots in ``eta > 0`` are the
    spheroidal eigenfrequencies ``omega = eta v_T / a``.
    """
    h = eta * velocity_ratio
    k = eta
    lam_mu = 1.0 / velocity_ratio**2 - 2.0
    L = l * (l + 1)
    jh, djh, d2jh = _jn_derivs(l, h)
    # longitudinal column: U = h j', V = j
    U_A, dU_A = h * djh, h * h * d2jh
    V_A, dV_A = jh, h * djh - jh
    rr_A = -lam_mu * h * h * jh + 2.0 * dU_A
    if l == 0:
        return rr_A
    jk, djk, d2jk = _jn_derivs(l, k)
    # shear column: U = L j, V = j + k j'
    U_B, dU_B = L * jk, L * (k * djk - jk)
    V_B = jk + k * djk
    dV_B = k * djk - jk + k * k * d2jk
    rr_B = 2.0 * dU_B
    rt_A = dV_A - V_A + U_A
    rt_B = dV_B - V_B + U_B
    return rr_A * rt_B - rr_B * rt_A


def dimensionless_roots(l: int, velocity_ratio: float, count: int,
                        eta_max: float = 200.0, grid_step: float = 0.01) -> list[float]:
    """First ``count`` roots ``eta = omega a / v_T`` for angular number ``l``.

    Scans a uniform grid for sign changes, then refines each by Brent's method.
    """
    if l < 0 or count < 1:
        raise ValidationError("need l >= 0 and count >= 1", "l")
    eta0 = 1e-3
    roots: list[float] = []
    chunk = 20.0
    lo = eta0
    while lo < eta_max and len(roots) < count:
        grid = np.arange(lo, min(lo + chunk, eta_max) + grid_step, grid_step)
        sign = np.sign(characteristic(grid, l, velocity_ratio))
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            roots.append(brentq(characteristic, grid[i], grid[i + 1],
                                args=(l, velocity_ratio), xtol=1e-14, rtol=1e-15))
            if len(roots) == count:
                return roots
        lo = grid[-1]
    raise RootBracketError(
        f"found {len(roots)} of {count} roots for l={l} in eta in [{eta0}, {eta_max}]"
    )


def spheroidal_frequency(sphere: ElasticSphere, n: int, l: int) -> float:
    """Frequency (Hz) of the n-th spheroidal family with angular number ``l``."""
    if n < 1:
        raise ValidationError("radial mode number must be >= 1", "n")
    eta = dimensionless_roots(l, sphere.velocity_ratio, n)[n - 1]
    return eta * sphere.v_transverse / (TWO_PI * sphere.radius)


def mode_catalog(sphere: ElasticSphere, l_max: int, n_max: int, l_min: int = 0) -> list:
    """All spheroidal modes up to ``(n_max, l_max)``, degenerate ``m_a`` expanded."""
    if l_max > 10 or n_max > 10:
        raise ValidationError("catalog limited to l_max, n_max <= 10", "l_max")
    modes = []
    for l in range(l_min, l_max + 1):
        etas = dimensionless_roots(l, sphere.velocity_ratio, n_max)
        for n, eta in enumerate(etas, start=1):
            f = eta * sphere.v_transverse / (TWO_PI * sphere.radius)
            modes.extend(SpheroidalMode(n, l, m_a, f) for m_a in range(-l, l + 1))
    modes.sort(key=lambda md: (md.frequency, md.l, md.n, md.m_a))
    return modes


def calibrate_velocity(sphere: ElasticSphere, target_frequency: float = ANCHOR_FREQUENCY,
                       diameter: float = ANCHOR_DIAMETER, n: int = 1, l: int = 2) -> ElasticSphere:
    """Rescale both sound velocities so mode (n, l) hits ``target_frequency`` at ``diameter``."""
    probe = sphere.with_diameter(diameter)
    factor = target_frequency / spheroidal_frequency(probe, n, l)
    return sphere.scaled_velocities(factor)


def coupling_vs_diameter(diameter, exponent: float = 2.0, g0: float = COUPLING_ANCHOR,
                         d0: float = ANCHOR_DIAMETER, ceiling: float = COUPLING_CEILING):
    """Power-law magnon-phonon coupling ``g0 (d0/D)^p`` (rad/s).

    The default exponent 2 follows from zero-point strain scaling
    (displacement ~ 1/D over a length ~ D) and is not fitted to data.
    """
    diameter = np.asarray(diameter, dtype=float)
    if np.any(diameter <= 0):
        raise ValidationError("diameter must be positive", "diameter")
    if g0 > ceiling:
        raise ValidationError("calibration coupling exceeds the configured ceiling", "g0")
    g = g0 * (d0 / diameter) ** exponent
    return float(g) if g.ndim == 0 else g
