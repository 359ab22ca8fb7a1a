"""Fano / Lorentzian fits of narrow spectral features.

The model is ``c0 + c1*eps + A[(q + eps)^2/(1 + eps^2) - 1]`` with
``eps = (x - x0)/gamma``.  It is fitted by variable projection: the linear
coefficients are solved exactly for every trial ``(x0, gamma)``.  Of the two
equivalent ``q`` roots the one with ``|q| <= 1`` is reported, so a symmetric
line gives ``q = 0`` and the sign of ``q`` tracks the asymmetry direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import FitError

#: ``|q|`` below this classifies a feature as Lorentzian.
LORENTZIAN_Q = 0.05


@dataclass(frozen=True)
class LineshapeFit:
    kind: str
    center: float
    fwhm: float
    amplitude: float
    fano_q: float
    residual: float
    background: float = 0.0
    slope: float = 0.0
    lorentz_part: float = 0.0
    dispersive_part: float = 0.0

    def evaluate(self, x):
        eps = (np.asarray(x) - self.center) / (0.5 * self.fwhm)
        return (self.background + self.slope * eps
                + (self.lorentz_part + self.dispersive_part * eps) / (1 + eps**2))


def _basis(x, x0, gamma):
    eps = (x - x0) / gamma
    den = 1.0 + eps**2
    return np.column_stack([np.ones_like(eps), eps, 1.0 / den, eps / den])


def _project(x, y, x0, gamma):
    B = _basis(x, x0, gamma)
    coef, *_ = np.linalg.lstsq(B, y, rcond=None)
    return coef, y - B @ coef


def fano_q_from_parts(lorentz: float, dispersive: float) -> tuple[float, float]:
    """Map (symmetric, dispersive) amplitudes onto (A, q) with ``|q| <= 1``."""
    L, D = lorentz, dispersive
    if D == 0.0:
        return -L, 0.0
    sgn = 1.0 if L >= 0 else -1.0
    q = -D / (L + sgn * math.hypot(L, D))
    return D / (2 * q), q


def fit_lineshape(x, y, center_guess: float, width_guess: float,
                  noise_floor: float = 1e-12) -> LineshapeFit:
    """Fit one narrow feature on a linear background.

    ``width_guess`` is a half width.  Raises :class:`FitError` when the
    optimizer fails or the feature is indistinguishable from the background.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 8:
        raise FitError("need at least 8 matching samples")
    if width_guess <= 0:
        raise FitError("width guess must be positive")
    # work in units of the width guess around the guessed center
    u = (x - center_guess) / width_guess

    def resid(p):
        return _project(u, y, p[0], math.exp(p[1]))[1]

    sol = least_squares(resid, [0.0, 0.0], method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if not sol.success:
        raise FitError(f"lineshape fit did not converge: {sol.message}")
    u0, gamma_u = sol.x[0], math.exp(sol.x[1])
    coef, r = _project(u, y, u0, gamma_u)
    c0, c1, L, D = coef
    scale = max(abs(c0), np.max(np.abs(y)), 1e-300)
    if math.hypot(L, D) < noise_floor * scale:
        raise FitError("feature amplitude below the noise floor")
    A, q = fano_q_from_parts(L, D)
    return LineshapeFit(
        kind="lorentzian" if abs(q) < LORENTZIAN_Q else "fano",
        center=center_guess + u0 * width_guess,
        fwhm=2 * gamma_u * width_guess,
        amplitude=A,
        fano_q=q,
        residual=float(np.linalg.norm(r)),
        background=c0,
        slope=c1,
        lorentz_part=L,
        dispersive_part=D,
    )
