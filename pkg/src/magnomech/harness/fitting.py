"""Single-parameter extraction of g_mb from cooperativity-versus-field data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from ..errors import ValidationError
from .sweeps import SweepSpec, _field_point


@dataclass(frozen=True)
class FitOutcome:
    name: str
    value: Optional[float]
    stderr: Optional[float]
    residual_norm: float
    converged: bool
    message: str = ""


def _unit_curve(fields, spec: SweepSpec, branch: str) -> np.ndarray:
    # C is quadratic in g_mb, so one evaluation at g_mb = 1 rad/s fixes the shape
    unit = SweepSpec("bias_field", 1.0, 2.0, 2, spec.params.replace(g_mb=1.0), spec.power,
                     detuning_rule=spec.detuning_rule, omega_d=spec.omega_d,
                     power_scale=spec.power_scale)
    points = [_field_point((unit, H)) for H in fields]
    bad = [p.error for p in points if p.error]
    if bad:
        raise ValidationError(f"model failed at some fields: {bad[0]}", "fit.data")
    return np.array([p.C_minus if branch == "red" else p.C_plus for p in points])


def fit_gmb_from_cooperativity(fields, cooperativity, spec: SweepSpec,
                               branch: str = "red") -> FitOutcome:
    """Least-squares estimate of ``g_mb`` (rad/s) with every other parameter held.

    ``spec`` supplies the device, drive power and detuning rule; its
    ``g_mb`` is used only as the starting point.  The standard error comes
    from the Jacobian at the optimum with the residual variance estimated
    from the data.
    """
    H = np.asarray(fields, dtype=float)
    C = np.asarray(cooperativity, dtype=float)
    if H.shape != C.shape or H.ndim != 1:
        raise ValidationError("fields and cooperativities must be matching 1-D arrays", "fit.data")
    if H.size < 5:
        raise ValidationError("need at least 5 data points", "fit.data")
    if not (np.all(np.isfinite(H)) and np.all(np.isfinite(C))):
        raise ValidationError("data must be finite", "fit.data")
    if branch not in ("red", "blue"):
        raise ValidationError("branch must be red or blue", "fit.branch")
    if not np.any(C > 0):
        return FitOutcome("g_mb", None, None, float(np.linalg.norm(C)), False,
                          "no positive cooperativity in the data")

    shape = _unit_curve(H, spec, branch)
    scale = float(np.max(np.abs(C)))
    x0 = spec.params.g_mb if spec.params.g_mb > 0 else math.sqrt(scale / np.max(shape))

    def resid(x):
        return (x[0] ** 2 * shape - C) / scale

    sol = least_squares(resid, [x0], x_scale=[x0], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    g = abs(float(sol.x[0]))
    rnorm = float(np.linalg.norm(sol.fun) * scale)
    if not sol.success or g == 0.0:
        return FitOutcome("g_mb", None, None, rnorm, False, f"optimizer: {sol.message}")
    dof = max(H.size - 1, 1)
    jtj = float(sol.jac[:, 0] @ sol.jac[:, 0])
    var = float(sol.fun @ sol.fun) / dof
    stderr = math.sqrt(var / jtj) if jtj > 0 else float("inf")
    if not math.isfinite(stderr):
        return FitOutcome("g_mb", None, None, rnorm, False, "singular Jacobian")
    peak = int(np.argmax(shape))
    message = "" if 0 < peak < H.size - 1 else "data do not bracket the cooperativity maximum"
    return FitOutcome("g_mb", g, stderr, rnorm, True, message)
