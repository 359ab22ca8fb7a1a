"""Time the compiled RK4 kernel against the pure-Python fallback.

Both backends integrate the same driven three-mode system from the same
initial state; the script reports wall time per step and the largest
relative difference between the two final states.

    python3 benchmarks/bench_rk4.py [--steps N] [--repeat R]
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from magnomech import model
from magnomech.dynamics import _rk4_py, core
from magnomech.model import SystemParams


def _inputs(steps: int):
    p = SystemParams.reference_device()
    _, d = model.triple_resonance_drive(p, "blue", 1e-3)
    dt = core.max_stable_dt(p, d)
    coeffs = np.array([p.omega_a - d.omega_d, p.omega_m - d.omega_d, p.kappa_a, p.kappa_m,
                       p.omega_b, p.kappa_b, p.g_ma, p.g_mb])
    amps = np.array([math.sqrt(2 * p.kappa_e) * d.s_in], complex)
    freqs = np.array([0.0])
    y0 = np.array([1 + 1j, 2.0, 5e3], complex)
    return y0, 0.0, dt, steps, max(steps // 100, 1), coeffs, amps, freqs


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    try:
        from magnomech.dynamics import _rk4
    except ImportError:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")

    inputs = _inputs(args.steps)
    results = {}
    timings = {}
    for name, fn in (("cython", _rk4.rk4_integrate), ("python", _rk4_py.rk4_integrate)):
        results[name] = fn(*inputs)[0]
        timings[name] = min(timeit.repeat(lambda: fn(*inputs), number=1, repeat=args.repeat))

    diff = np.max(np.abs(results["cython"] - results["python"])
                  / np.maximum(np.abs(results["python"]), 1e-300))
    for name, t in timings.items():
        print(f"{name:7s} {t:9.4f} s  {1e6 * t / args.steps:8.3f} us/step")
    print(f"speedup {timings['python'] / timings['cython']:.1f}x, max rel diff {diff:.2e}")


if __name__ == "__main__":
    main()
