"""CSV ingestion with schema checks that name the offending file and row."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .core import DomainError
from .datafit import ForceDispSeries, SeriesMeta

SLOPE_HEADER = ["displacement_mm", "force_N"]
BLS_HEADER = ["alpha_deg", "stiffness_N_per_mm"]
CHAMBER_HEADER = ["pressure_kPa", "moment_Nm"]
ANGLE_PRESSURE_HEADER = ["pressure_kPa", "angle_deg", "branch"]
META_KEYS = {"bending_angle_deg", "pulling_mass_kg", "pressure_step_kPa", "label"}


class SchemaError(DomainError):
    def __init__(self, path: Path | str, row: int | None, message: str):
        where = f"{path}" if row is None else f"{path}, row {row}"
        super().__init__(where, message)


def read_rows(path: Path, header: list[str], numeric: int) -> list[list]:
    """Rows of ``path`` after checking the header; the first ``numeric``
    columns must parse as finite floats. Row numbers count the header as 1."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        found = next(reader, None)
        if found is None or [h.strip() for h in found] != header:
            raise SchemaError(path, 1, f"expected header {','.join(header)!r}, got {','.join(found or [])!r}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != len(header):
                raise SchemaError(path, lineno, f"expected {len(header)} fields, got {len(raw)}")
            row: list = []
            for i, cell in enumerate(raw):
                if i < numeric:
                    try:
                        value = float(cell)
                    except ValueError:
                        raise SchemaError(path, lineno, f"{header[i]} is not a number: {cell!r}") from None
                    if not math.isfinite(value):
                        raise SchemaError(path, lineno, f"{header[i]} must be finite")
                    row.append(value)
                else:
                    row.append(cell.strip())
            rows.append(row)
    if not rows:
        raise SchemaError(path, None, "no data rows")
    return rows


def read_meta(csv_path: Path) -> SeriesMeta:
    sidecar = csv_path.with_suffix(".json")
    if not sidecar.exists():
        return SeriesMeta(label=csv_path.stem)
    try:
        doc = json.loads(sidecar.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(sidecar, None, f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) - META_KEYS:
        raise SchemaError(sidecar, None, f"keys must be a subset of {sorted(META_KEYS)}")
    try:
        return SeriesMeta(
            float(doc.get("bending_angle_deg", 0.0)),
            float(doc.get("pulling_mass_kg", 0.0)),
            float(doc.get("pressure_step_kPa", 0.0)),
            str(doc.get("label", csv_path.stem)),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(sidecar, None, str(exc)) from None


def read_series(path: Path) -> ForceDispSeries:
    rows = read_rows(path, SLOPE_HEADER, 2)
    try:
        return ForceDispSeries(tuple(r[0] * 1e-3 for r in rows), tuple(r[1] for r in rows), read_meta(path))
    except DomainError as exc:
        raise SchemaError(path, None, str(exc)) from None


def read_bls(path: Path) -> list[tuple[float, float]]:
    """(alpha rad, k N/m) pairs."""
    out = []
    for lineno, (angle, k) in enumerate(read_rows(path, BLS_HEADER, 2), start=2):
        if not 0.0 < angle <= 180.0:
            raise SchemaError(path, lineno, f"alpha_deg must lie in (0, 180], got {angle!r}")
        out.append((math.radians(angle), k * 1e3))
    return out


def read_chambers(path: Path) -> list[tuple[float, float]]:
    """(pressure Pa, moment N*m) pairs."""
    return [(p * 1e3, m) for p, m in read_rows(path, CHAMBER_HEADER, 2)]


def read_angle_pressure(path: Path) -> list[tuple[float, float, str]]:
    return [(p, a, b) for p, a, b in read_rows(path, ANGLE_PRESSURE_HEADER, 2)]
