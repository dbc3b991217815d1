"""Deterministic artifact serialization: CSV tables, pulse JSON, manifests.

Numeric CSV cells are written with 17 significant digits (enough to
round-trip a float64 exactly), LF line endings, and no locale-dependent
formatting, so identical inputs always produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .splines import SplineBasis, SplinePulse

__all__ = [
    "format_number",
    "emit_timeseries",
    "read_timeseries",
    "save_pulse",
    "load_pulse",
    "write_manifest",
    "load_manifest",
    "RATE_UNITS",
]

# see zreadout.params: rates are stored as the quoted x/2pi values in 1/s
RATE_UNITS = "cyclic_hz"

PULSE_FORMAT = "zreadout-pulse-v1"
MANIFEST_FORMAT = "zreadout-manifest-v1"


def format_number(value: Any) -> str:
    if isinstance(value, str):
        if "," in value or "\n" in value:
            raise ValueError(f"cell {value!r} would break the unquoted CSV format")
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def emit_timeseries(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write a numeric CSV with a header row; every row must match the
    header width."""
    path = Path(path)
    lines = [",".join(columns)]
    width = len(columns)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"row {i} has {len(row)} cells, expected {width}")
        lines.append(",".join(format_number(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_timeseries(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a CSV written by emit_timeseries back into (columns, array)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line]
    columns = lines[0].split(",")
    data = np.array([[float(cell) for cell in line.split(",")] for line in lines[1:]])
    if data.size == 0:
        data = data.reshape(0, len(columns))
    return columns, data


def save_pulse(path: str | Path, pulse: SplinePulse) -> Path:
    """Persist a spline pulse as JSON (knots, coefficients, units)."""
    payload = {
        "format": PULSE_FORMAT,
        "degree": pulse.basis.degree,
        "knots_s": [float(k) for k in pulse.basis.knots],
        "coeffs": [float(c) for c in pulse.coeffs],
        "t_f_s": pulse.t_f,
        "rate_units": RATE_UNITS,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def load_pulse(path: str | Path) -> SplinePulse:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != PULSE_FORMAT:
        raise ValueError(f"{path}: not a {PULSE_FORMAT} file")
    basis = SplineBasis(knots=np.array(payload["knots_s"]), degree=int(payload["degree"]))
    return SplinePulse(basis=basis, coeffs=np.array(payload["coeffs"]))


def _jsonable(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return _jsonable(asdict(value))
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def write_manifest(
    path: str | Path,
    command: str,
    config_snapshot: dict[str, Any],
    rng_seed: int,
    artifacts: list[str],
    extra: dict[str, Any] | None = None,
) -> Path:
    """Record everything needed to reproduce a run.  Written before any
    result file so a crashed run still leaves its provenance behind."""
    from . import __version__

    payload: dict[str, Any] = {
        "format": MANIFEST_FORMAT,
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "rate_units": RATE_UNITS,
        "rng_seed": int(rng_seed),
        "config": _jsonable(config_snapshot),
        "artifacts": list(artifacts),
    }
    if extra:
        payload.update(_jsonable(extra))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def load_manifest(path: str | Path) -> dict[str, Any]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != MANIFEST_FORMAT:
        raise ValueError(f"{path}: not a {MANIFEST_FORMAT} file")
    return payload
