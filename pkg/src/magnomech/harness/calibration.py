"""Single power-scale calibration persisted next to run outputs.

The scale ``eta`` multiplies the nominal drive power (after dBm conversion)
to give the power reaching the device.  It is fixed by one anchor: the
cooperativity measured at a given nominal power in the red triple-resonance
configuration.  Since ``C`` is linear in power, ``eta = C_anchor / C_model``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .. import model
from ..errors import ValidationError
from ..model import SystemParams
from ..units import dbm_to_watts

CALIBRATION_FILE = "calibration.json"


@dataclass(frozen=True)
class Calibration:
    power_scale: float
    anchor_power_dbm: float
    anchor_cooperativity: float
    anchor_branch: str
    predicted_cooperativity: float

    @property
    def scale_db(self) -> float:
        return 10 * math.log10(self.power_scale)


def anchor_cooperativity(params: SystemParams, power_dbm: float, branch: str = "red") -> float:
    """Model cooperativity at nominal ``power_dbm`` with no line loss."""
    probe, drive = model.triple_resonance_drive(params, branch, float(dbm_to_watts(power_dbm)))
    return model.probe_cooperativity(params, drive, probe)


def calibrate(params: SystemParams, power_dbm: float = 8.0, cooperativity: float = 2.4,
              branch: str = "red") -> Calibration:
    if cooperativity <= 0:
        raise ValidationError("anchor cooperativity must be positive", "calibration.anchor_cooperativity")
    c_model = anchor_cooperativity(params, power_dbm, branch)
    if c_model <= 0:
        raise ValidationError("model predicts no coupling at the anchor", "device.magnon_phonon_coupling")
    return Calibration(cooperativity / c_model, power_dbm, cooperativity, branch, c_model)


def save(cal: Calibration, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(asdict(cal), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def load(path: str | Path) -> Calibration:
    try:
        with open(path) as fh:
            data = json.load(fh)
        return Calibration(**data)
    except FileNotFoundError:
        raise ValidationError(f"calibration file not found: {path}", "calibration.file") from None
    except (json.JSONDecodeError, TypeError) as exc:
        raise ValidationError(f"malformed calibration file: {exc}", "calibration.file") from None


def resolve(cfg: dict, out_dir: Optional[str | Path]) -> Optional[Calibration]:
    """Calibration named in the config, else the sidecar in ``out_dir`` if present."""
    explicit = cfg["calibration"]["file"]
    if explicit:
        return load(explicit)
    if out_dir is not None:
        sidecar = Path(out_dir) / CALIBRATION_FILE
        if sidecar.exists():
            return load(sidecar)
    return None


def power_flag(cal: Optional[Calibration]) -> str:
    return "calibrated" if cal is not None else "predicted"


def power_scale(cal: Optional[Calibration]) -> float:
    return 1.0 if cal is None else cal.power_scale
