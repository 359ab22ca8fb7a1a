"""JSON run configuration with documented units and reference-device defaults.

Units at this boundary: frequencies and linewidths in Hz (linewidths are
full widths ``2 kappa / 2pi``), powers in dBm, fields in tesla, lengths in
meters, times in seconds.
"""
from __future__ import annotations

import copy
import json
import math
from pathlib import Path
from typing import Any, Optional

from ..elastica import ElasticSphere
from ..errors import ValidationError
from ..model import SystemParams, field_for_frequency
from ..units import TWO_PI, dbm_to_watts

DEFAULTS: dict[str, Any] = {
    "device": {
        "cavity_frequency": 7.86e9,
        "cavity_linewidth": 3.35e6,
        # external linewidth 2 kappa_e / 2pi; null -> half the cavity linewidth
        "external_linewidth": None,
        "magnon_linewidth": 1.12e6,
        "phonon_frequency": 11.42e6,
        "phonon_linewidth": 300.0,
        # g_ma / 2pi; null -> phonon_frequency / 2 (triple resonance)
        "photon_magnon_coupling": None,
        "magnon_phonon_coupling": 4.1e-3,
        "gyromagnetic_ratio": 28e9,
        # null -> field that puts the magnon on the cavity
        "bias_field": None,
    },
    "drive": {
        "power_dbm": 8.0,
        "branch": "red",
        # "triple": drive on the other hybrid mode; "sideband": drive one
        # phonon frequency off the probed mode (red: lower, blue: upper)
        "geometry": "triple",
        # extra drive offset from the locked frequency, Hz
        "offset": 0.0,
        # explicit drive frequency in Hz; overrides the lock when set
        "frequency": None,
    },
    "probe": {
        # "window": narrow grid around the phonon feature; "broad": hybrid modes
        "mode": "window",
        "span": None,
        "points": 801,
    },
    "sweep": {
        "axis": "drive_power",
        "start": -10.0,
        "stop": 4.0,
        "points": 8,
        "scale": "linear",
        "detuning_rule": "lock",
        "branches": ["red", "blue"],
    },
    "lasing": {
        "relative_powers": [0.8, 0.9, 1.1, 1.2, 1.3, 1.5],
        "t_end": 0.08,
        "seed_amplitude": 1e8,
        "stride": 20,
        "trajectory": False,
    },
    "elastic": {
        "diameter": 250e-6,
        "density": 5170.0,
        "v_longitudinal": 7209.0,
        "v_transverse": 3843.0,
        "calibrate": True,
        "l_max": 4,
        "n_max": 3,
        "coupling_exponent": 2.0,
    },
    "fit": {
        "data": None,
        "power_dbm": 30.0,
        "branch": "red",
    },
    "calibration": {
        "file": None,
        "anchor_power_dbm": 8.0,
        "anchor_cooperativity": 2.4,
        "anchor_branch": "red",
    },
    "workers": 1,
}

_POSITIVE_DEVICE = (
    "cavity_frequency", "cavity_linewidth", "magnon_linewidth", "phonon_frequency",
    "phonon_linewidth", "gyromagnetic_ratio",
)


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ValidationError("unknown configuration field", where)
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ValidationError("expected an object", where)
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


def parse_override(item: str) -> tuple[str, Any]:
    """``key.sub=value``; the value is read as JSON when possible."""
    if "=" not in item:
        raise ValidationError(f"override {item!r} is not key=value", "--set")
    key, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def _nest(key: str, value: Any) -> dict:
    out: dict = {}
    node = out
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value
    return out


def load_config(path: Optional[str | Path] = None, overrides: tuple = ()) -> dict:
    """Defaults merged with a JSON file and ``--set`` overrides, then validated."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ValidationError(f"config file not found: {path}", "--config") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}", "--config") from None
        if not isinstance(data, dict):
            raise ValidationError("top level must be an object", "config")
        cfg = _merge(cfg, data)
    for item in overrides:
        key, value = parse_override(item)
        cfg = _merge(cfg, _nest(key, value))
    validate(cfg)
    return cfg


def _number(cfg, section, key, positive=False, allow_none=False):
    value = cfg[section][key]
    where = f"{section}.{key}"
    if value is None and allow_none:
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ValidationError(f"expected a finite number, got {value!r}", where)
    if positive and value <= 0:
        raise ValidationError("must be positive", where)


def validate(cfg: dict) -> None:
    for key in _POSITIVE_DEVICE:
        _number(cfg, "device", key, positive=True)
    for key in ("external_linewidth", "photon_magnon_coupling", "bias_field"):
        _number(cfg, "device", key, positive=True, allow_none=True)
    _number(cfg, "device", "magnon_phonon_coupling")
    if cfg["device"]["magnon_phonon_coupling"] < 0:
        raise ValidationError("must be >= 0", "device.magnon_phonon_coupling")
    _number(cfg, "drive", "power_dbm")
    _number(cfg, "drive", "offset")
    _number(cfg, "drive", "frequency", positive=True, allow_none=True)
    if cfg["drive"]["branch"] not in ("red", "blue"):
        raise ValidationError("must be 'red' or 'blue'", "drive.branch")
    if cfg["drive"]["geometry"] not in ("triple", "sideband"):
        raise ValidationError("must be 'triple' or 'sideband'", "drive.geometry")
    if cfg["probe"]["mode"] not in ("window", "broad"):
        raise ValidationError("must be 'window' or 'broad'", "probe.mode")
    _number(cfg, "probe", "span", positive=True, allow_none=True)
    sweep = cfg["sweep"]
    if sweep["axis"] not in ("bias_field", "drive_power", "drive_detuning", "probe_grid"):
        raise ValidationError("unknown sweep axis", "sweep.axis")
    if sweep["scale"] not in ("linear", "log"):
        raise ValidationError("must be 'linear' or 'log'", "sweep.scale")
    if sweep["detuning_rule"] not in ("lock", "fixed"):
        raise ValidationError("must be 'lock' or 'fixed'", "sweep.detuning_rule")
    _number(cfg, "sweep", "start")
    _number(cfg, "sweep", "stop")
    if not isinstance(sweep["points"], int) or sweep["points"] < 2:
        raise ValidationError("need an integer >= 2", "sweep.points")
    if not isinstance(cfg["probe"]["points"], int) or cfg["probe"]["points"] < 8:
        raise ValidationError("need an integer >= 8", "probe.points")
    if not set(sweep["branches"]) <= {"red", "blue"} or not sweep["branches"]:
        raise ValidationError("branches must be a non-empty subset of red/blue", "sweep.branches")
    if not isinstance(cfg["workers"], int) or cfg["workers"] < 1:
        raise ValidationError("need an integer >= 1", "workers")
    for key in ("diameter", "density", "v_longitudinal", "v_transverse"):
        _number(cfg, "elastic", key, positive=True)
    _number(cfg, "calibration", "anchor_power_dbm")
    _number(cfg, "calibration", "anchor_cooperativity", positive=True)
    # constructing the parameter record runs its own invariants
    system_params(cfg)


def system_params(cfg: dict) -> SystemParams:
    dev = cfg["device"]
    kappa_a = math.pi * dev["cavity_linewidth"]
    ext = dev["external_linewidth"]
    kappa_e = kappa_a / 2 if ext is None else math.pi * ext
    omega_a = TWO_PI * dev["cavity_frequency"]
    omega_b = TWO_PI * dev["phonon_frequency"]
    gamma = TWO_PI * dev["gyromagnetic_ratio"]
    g_ma = omega_b / 2 if dev["photon_magnon_coupling"] is None else TWO_PI * dev["photon_magnon_coupling"]
    field = dev["bias_field"]
    omega_m = omega_a if field is None else gamma * field
    try:
        return SystemParams(
            omega_a=omega_a, kappa_a=kappa_a, kappa_e=kappa_e, omega_m=omega_m,
            kappa_m=math.pi * dev["magnon_linewidth"], omega_b=omega_b,
            kappa_b=math.pi * dev["phonon_linewidth"], g_ma=g_ma,
            g_mb=TWO_PI * dev["magnon_phonon_coupling"], gamma_gyro=gamma,
        )
    except ValidationError as exc:
        raise ValidationError(str(exc), f"device.{exc.field}" if exc.field else "device") from None


def resonant_field(cfg: dict) -> float:
    p = system_params(cfg)
    return field_for_frequency(p.omega_a, p.gamma_gyro)


def drive_power_watts(cfg: dict, power_scale: float = 1.0, power_dbm: Optional[float] = None) -> float:
    dbm = cfg["drive"]["power_dbm"] if power_dbm is None else power_dbm
    return float(dbm_to_watts(dbm)) * power_scale


def elastic_sphere(cfg: dict) -> ElasticSphere:
    el = cfg["elastic"]
    return ElasticSphere(el["diameter"], el["density"], el["v_longitudinal"], el["v_transverse"])
