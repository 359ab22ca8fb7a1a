"""Command-line entry point: ``magnomech <subcommand> [--config PATH] [--out DIR]``.

Every subcommand writes ``<subcommand>.csv`` and ``<subcommand>_summary.json``
into the output directory.  Exit status is 0 on success, 1 for invalid input
and 2 when the physics has no answer (e.g. an unstable working point where a
stable one is required).
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .. import model, spectrum
from ..dynamics import core, lasing
from ..elastica import calibrate_velocity, coupling_vs_diameter, mode_catalog
from ..errors import MagnomechError, ValidationError
from ..model import DriveTone
from ..units import TWO_PI, dbm_to_watts, watts_to_dbm
from . import calibration, config, io
from .fitting import fit_gmb_from_cooperativity
from .sweeps import (SweepSpec, _field_point, blue_threshold, sweep_cooperativity_vs_field,
                     sweep_drive_detuning, sweep_linewidth_vs_power, sweep_probe_grid)

COMMANDS = ("spectrum", "sweep", "stability", "lasing", "modes", "fit", "calibrate")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message, "argv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magnomech", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="JSON configuration file")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="dotted-path override, e.g. drive.power_dbm=6")
    return parser


# -- shared helpers -----------------------------------------------------------

def _drive(cfg: dict, params, power: float):
    """(probe mode, drive tone) described by the ``drive`` section."""
    d = cfg["drive"]
    branch = d["branch"]
    if d["frequency"] is not None:
        drive = DriveTone(TWO_PI * d["frequency"], power)
        if branch == "blue":
            return core.stokes_mode(params, drive), drive
        return _anti_stokes(params, drive), drive
    if d["geometry"] == "triple":
        probe, drive = model.triple_resonance_drive(params, branch, power)
    else:
        probe = model.MINUS if branch == "red" else model.PLUS
        drive = model.locked_drive(params, probe, branch, power)
    return probe, DriveTone(drive.omega_d + TWO_PI * d["offset"], power)


def _anti_stokes(params, drive):
    basis = model.hybridize(params)
    target = drive.omega_d + params.omega_b
    return min((model.PLUS, model.MINUS), key=lambda k: abs(basis.omega(k) - target))


def _context(cfg, out):
    params = config.system_params(cfg)
    cal = calibration.resolve(cfg, out)
    return params, cal, calibration.power_scale(cal)


def _base_summary(command, cfg, params, cal) -> dict:
    return {
        "command": command,
        "config": cfg,
        "parameters": io.params_summary(params),
        "power_flag": calibration.power_flag(cal),
        "calibration": cal,
        "warnings": [],
    }


def _write(out: Path, command: str, schema: str, columns, rows, summary) -> None:
    io.write_csv(out / f"{command}.csv", schema, columns, rows)
    io.write_summary(out / f"{command}_summary.json", summary)


# -- subcommands ----------------------------------------------------------------

def cmd_spectrum(cfg, out):
    params, cal, scale = _context(cfg, out)
    power = config.drive_power_watts(cfg, scale)
    probe, drive = _drive(cfg, params, power)
    summary = _base_summary("spectrum", cfg, params, cal)
    pr = cfg["probe"]
    fp = core.steady_state(params, drive)
    if pr["mode"] == "window":
        span = pr["span"] or 8.0
        grid = spectrum.window_grid(params, drive, span, pr["points"], fixed_point=fp)
        win = spectrum.mmit_window(params, drive, span, pr["points"], fixed_point=fp)
        summary["window"] = {"center_hz": win.center / TWO_PI, "fwhm_hz": win.fwhm / TWO_PI,
                             "peak_reflectance": win.peak_reflectance, "kind": win.fit.kind,
                             "fano_q": win.fit.fano_q, "fit_residual": win.fit.residual}
    else:
        basis = model.hybridize(params)
        span = pr["span"] or 4.0
        lo = basis.omega_minus - span * basis.kappa_minus
        hi = basis.omega_plus + span * basis.kappa_plus
        grid = np.linspace(lo, hi, pr["points"])
    spec = spectrum.reflection_spectrum(params, drive, grid, fixed_point=fp)
    summary["drive"] = {"frequency_hz": drive.omega_d / TWO_PI, "power_w": drive.power,
                        "probe_mode": "plus" if probe == model.PLUS else "minus",
                        "cooperativity": model.probe_cooperativity(params, drive, probe)}
    rows = [(f / TWO_PI, (f - drive.omega_d) / TWO_PI, r.real, r.imag, abs(r) ** 2)
            for f, r in zip(spec.probe_freqs, spec.r)]
    _write(out, "spectrum", "spectrum",
           ("probe_hz", "detuning_hz", "re_r", "im_r", "reflectance"), rows, summary)


def _spec(cfg, params, scale) -> SweepSpec:
    sw, d = cfg["sweep"], cfg["drive"]
    omega_d = TWO_PI * d["frequency"] if d["frequency"] is not None else None
    return SweepSpec(sw["axis"], float(sw["start"]), float(sw["stop"]), sw["points"], params,
                     config.drive_power_watts(cfg), d["branch"], sw["scale"], sw["detuning_rule"],
                     omega_d, scale, tuple(sw["branches"]))


def cmd_sweep(cfg, out):
    params, cal, scale = _context(cfg, out)
    spec = _spec(cfg, params, scale)
    workers = cfg["workers"]
    summary = _base_summary("sweep", cfg, params, cal)
    cols = io.PARAM_COLUMNS
    if spec.axis == "bias_field":
        pts = sweep_cooperativity_vs_field(spec, workers)
        rows = [(p.field, p.C_minus, p.C_plus, p.f_drive_minus, p.f_drive_plus, p.error or "",
                 *io.param_cells(p.params)) for p in pts]
        columns = ("field_t", "C_minus", "C_plus", "f_drive_minus_hz", "f_drive_plus_hz", "error", *cols)
        summary["failed_points"] = sum(1 for p in pts if p.error)
        schema = "cooperativity_vs_field"
    elif spec.axis == "drive_power":
        pts = sweep_linewidth_vs_power(spec, workers)
        rows = [(p.branch, p.power_dbm, p.power, p.cooperativity, p.fwhm_fit, p.fwhm_pole,
                 p.center, p.reflectance, p.reflectance_closed, p.status, *io.param_cells(params))
                for p in pts]
        columns = ("branch", "power_dbm", "power_w", "C", "fwhm_fit_hz", "fwhm_pole_hz",
                   "center_hz", "reflectance", "reflectance_closed", "status", *cols)
        if "blue" in spec.branches:
            summary["blue_threshold"] = blue_threshold(params, scale)
        schema = "window_vs_power"
    elif spec.axis == "drive_detuning":
        pts = sweep_drive_detuning(spec, workers)
        rows = [(p.branch, p.offset, p.fano_q, p.kind, p.center, p.fwhm, p.status,
                 *io.param_cells(params)) for p in pts]
        columns = ("branch", "offset_hz", "fano_q", "kind", "center_hz", "fwhm_hz", "status", *cols)
        schema = "lineshape_vs_detuning"
    else:
        _, drive = _drive(cfg, params, config.drive_power_watts(cfg, scale))
        sp = sweep_probe_grid(spec, drive)
        rows = [(f / TWO_PI, r.real, r.imag, abs(r) ** 2, *io.param_cells(params))
                for f, r in zip(sp.probe_freqs, sp.r)]
        columns = ("probe_hz", "re_r", "im_r", "reflectance", *cols)
        schema = "probe_grid"
    summary["axis"] = spec.axis
    _write(out, "sweep", schema, columns, rows, summary)


def cmd_stability(cfg, out):
    params, cal, scale = _context(cfg, out)
    probe, drive = _drive(cfg, params, config.drive_power_watts(cfg, scale))
    basis = model.hybridize(params)
    blue = drive.omega_d > basis.omega(core.stokes_mode(params, drive))
    report = core.stability_analysis(params, drive, threshold=blue)
    summary = _base_summary("stability", cfg, params, cal)
    summary.update(stable=report.stable, max_real=report.max_real,
                   cooperativity=model.probe_cooperativity(params, drive, probe))
    if report.threshold_power is not None:
        summary.update(threshold_w=report.threshold_power,
                       threshold_dbm_nominal=float(watts_to_dbm(report.threshold_power / scale)),
                       C_at_threshold=report.predicted_C_at_threshold)
    ev = sorted(report.eigenvalues, key=lambda z: (-z.real, z.imag))
    rows = [(z.real, z.imag) for z in ev]
    _write(out, "stability", "eigenvalues", ("re_rad_s", "im_rad_s"), rows, summary)


def cmd_lasing(cfg, out):
    params, cal, scale = _context(cfg, out)
    las = cfg["lasing"]
    _, drive = model.triple_resonance_drive(params, "blue", 1e-3)
    p_th = core.instability_threshold(params, drive)
    powers = [f * p_th for f in las["relative_powers"]]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        est = lasing.sideband_sweep(params, drive, powers, las["t_end"],
                                    seed_amplitude=las["seed_amplitude"], stride=las["stride"])
    summary = _base_summary("lasing", cfg, params, cal)
    summary["warnings"] = sorted({str(w.message) for w in caught})
    summary.update(threshold_w=p_th, threshold_dbm_nominal=float(watts_to_dbm(p_th / scale)))
    try:
        knee = lasing.threshold_knee(powers, [e.power for e in est])
        summary.update(knee_w=knee, knee_over_threshold=knee / p_th)
    except ValidationError as exc:
        summary["warnings"].append(f"knee: {exc}")
    rows = [(f, p, e.power, e.frequency / TWO_PI, e.settled)
            for f, p, e in zip(las["relative_powers"], powers, est)]
    _write(out, "lasing", "stokes_sideband",
           ("relative_power", "power_w", "sideband_w", "offset_hz", "settled"), rows, summary)


def cmd_modes(cfg, out):
    el = cfg["elastic"]
    sphere = config.elastic_sphere(cfg)
    summary = {"command": "modes", "config": cfg, "warnings": []}
    if el["calibrate"]:
        sphere = calibrate_velocity(sphere).with_diameter(el["diameter"])
        summary["flag"] = "calibrated"
    else:
        summary["flag"] = "predicted"
    summary["sphere"] = sphere
    g = coupling_vs_diameter(sphere.diameter, exponent=el["coupling_exponent"])
    summary["g_mb_hz"] = g / TWO_PI
    modes = mode_catalog(sphere, el["l_max"], el["n_max"])
    rows = [(m.n, m.l, m.m_a, m.frequency, m.frequency * sphere.diameter) for m in modes]
    _write(out, "modes", "spheroidal_modes", ("n", "l", "m_a", "frequency_hz", "f_times_d_hz_m"),
           rows, summary)


def _read_fit_data(path, branch):
    info = None
    try:
        info, columns, rows = io.read_csv(path)
    except ValueError:
        pass
    except FileNotFoundError:
        raise ValidationError(f"data file not found: {path}", "fit.data") from None
    if info is not None:
        key = "C_minus" if branch == "red" else "C_plus"
        if "field_t" not in columns or key not in columns:
            raise ValidationError(f"expected columns field_t and {key}", "fit.data")
        i, j = columns.index("field_t"), columns.index(key)
        data = np.array([(float(r[i]), float(r[j])) for r in rows if r[j] not in ("", "nan")])
    else:
        try:
            data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        except ValueError:
            data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, skiprows=1)
    if data.ndim != 2 or data.shape[1] < 2:
        raise ValidationError("need two columns: field (T), cooperativity", "fit.data")
    return data[:, 0], data[:, 1]


def cmd_fit(cfg, out):
    params, cal, scale = _context(cfg, out)
    ft = cfg["fit"]
    if not ft["data"]:
        raise ValidationError("missing data file", "fit.data")
    H, C = _read_fit_data(ft["data"], ft["branch"])
    spec = SweepSpec("bias_field", float(H.min()), float(H.max()) + 1e-12, 2, params,
                     float(dbm_to_watts(ft["power_dbm"])), ft["branch"], power_scale=scale)
    outcome = fit_gmb_from_cooperativity(H, C, spec, ft["branch"])
    summary = _base_summary("fit", cfg, params, cal)
    summary["fit"] = outcome
    if outcome.converged:
        summary["g_mb_hz"] = outcome.value / TWO_PI
        summary["g_mb_stderr_hz"] = outcome.stderr / TWO_PI
        if outcome.message:
            summary["warnings"].append(outcome.message)
        fitted = params.replace(g_mb=outcome.value)
        model_spec = SweepSpec("bias_field", 1.0, 2.0, 2, fitted, spec.power, power_scale=scale)
        pts = [_field_point((model_spec, h)) for h in H]
        model_c = [p.C_minus if ft["branch"] == "red" else p.C_plus for p in pts]
    else:
        model_c = [float("nan")] * len(H)
    rows = list(zip(H, C, model_c))
    _write(out, "fit", "cooperativity_fit", ("field_t", "C_data", "C_model"), rows, summary)


def cmd_calibrate(cfg, out):
    params = config.system_params(cfg)
    c = cfg["calibration"]
    cal = calibration.calibrate(params, c["anchor_power_dbm"], c["anchor_cooperativity"],
                                c["anchor_branch"])
    calibration.save(cal, out / calibration.CALIBRATION_FILE)
    summary = _base_summary("calibrate", cfg, params, cal)
    summary["power_flag"] = "calibrated"
    summary["scale_db"] = cal.scale_db
    th = blue_threshold(params, cal.power_scale)
    summary["blue_threshold_dbm_nominal"] = th.power_dbm_nominal
    rows = [(cal.anchor_power_dbm, cal.anchor_cooperativity, cal.predicted_cooperativity,
             cal.power_scale, cal.scale_db, th.power_dbm_nominal)]
    _write(out, "calibrate", "calibration",
           ("anchor_power_dbm", "anchor_C", "model_C", "power_scale", "scale_db",
            "blue_threshold_dbm"), rows, summary)


HANDLERS = {
    "spectrum": cmd_spectrum, "sweep": cmd_sweep, "stability": cmd_stability,
    "lasing": cmd_lasing, "modes": cmd_modes, "fit": cmd_fit, "calibrate": cmd_calibrate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config.load_config(args.config, tuple(args.overrides))
        args.out.mkdir(parents=True, exist_ok=True)
        HANDLERS[args.command](cfg, args.out)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except MagnomechError as exc:
        print(f"physics error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
