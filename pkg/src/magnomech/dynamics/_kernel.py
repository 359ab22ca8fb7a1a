"""Selects the compiled RK4 kernel when available.

Set ``MAGNOMECH_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

from . import _rk4_py

if os.environ.get("MAGNOMECH_PURE_PYTHON", "") not in ("", "0"):
    rk4_integrate = _rk4_py.rk4_integrate
    BACKEND = "python"
else:
    try:
        from ._rk4 import rk4_integrate
        BACKEND = "cython"
    except ImportError:  # extension not built
        rk4_integrate = _rk4_py.rk4_integrate
        BACKEND = "python"

python_rk4_integrate = _rk4_py.rk4_integrate
