"""Flat-file outputs: versioned CSV tables and a JSON run summary."""
from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..model import SystemParams
from ..units import TWO_PI

CSV_VERSION = 1


def format_value(value) -> str:
    """Deterministic text for one cell (``repr`` round-trips floats exactly)."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_csv(path: str | Path, schema: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write a table with a ``# magnomech-csv v1 schema=...`` first line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(f"# magnomech-csv v{CSV_VERSION} schema={schema} columns={len(columns)}\n")
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError(f"row has {len(row)} cells, schema has {len(columns)}")
            writer.writerow([format_value(v) for v in row])
    return path


def read_csv(path: str | Path) -> tuple[dict, list[str], list[list[str]]]:
    """Inverse of :func:`write_csv`; returns (header info, columns, rows)."""
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("# magnomech-csv v"):
            raise ValueError(f"{path}: missing magnomech-csv header")
        info = dict(item.split("=", 1) for item in first[2:].split()[2:])
        info["version"] = int(first.split()[2].lstrip("v"))
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [row for row in reader]
    return info, columns, rows


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    return obj


def write_summary(path: str | Path, summary: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


#: columns describing the resolved system, appended to every sweep row
PARAM_COLUMNS = (
    "f_a_hz", "lw_a_hz", "lw_e_hz", "f_m_hz", "lw_m_hz", "f_b_hz", "lw_b_hz",
    "g_ma_hz", "g_mb_hz",
)


def param_cells(params: SystemParams) -> list[float]:
    """Resolved parameters in Hz (linewidths as full widths)."""
    return [
        params.omega_a / TWO_PI, params.kappa_a / math.pi, params.kappa_e / math.pi,
        params.omega_m / TWO_PI, params.kappa_m / math.pi, params.omega_b / TWO_PI,
        params.kappa_b / math.pi, params.g_ma / TWO_PI, params.g_mb / TWO_PI,
    ]


def params_summary(params: SystemParams) -> dict:
    return dict(zip(PARAM_COLUMNS, param_cells(params)))
