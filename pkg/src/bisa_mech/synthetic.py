"""Synthetic bench data generated from the models, in the ingestion formats.

No raw measurements accompany the model, so end-to-end runs use these files.
Everything written here is labeled synthetic.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .bending import withstand_moment
from .config import KPA, MM, RunConfig
from .lateral import lateral_stiffness


def lateral_stiffness_at(model, angle_deg: float) -> float:
    """k in N/m, using the straight-cantilever limit 3EI/C^3 at 0 deg."""
    if angle_deg == 0.0:
        return 3.0 * model.flexural_scale
    return lateral_stiffness(model, math.radians(angle_deg)).stiffness


def _noisy(values: np.ndarray, rel: float, rng: np.random.Generator) -> np.ndarray:
    if rel == 0.0:
        return values
    return values * (1.0 + rel * rng.standard_normal(values.shape))


def _fmt(v: float) -> str:
    return repr(float(v))


def write_dataset(cfg: RunConfig, out: Path) -> list[Path]:
    """Write slope series, BLS stiffness, chamber moments and angle-pressure files."""
    syn = cfg["synthetic"]
    rng = np.random.default_rng(syn["seed"])
    rel = syn["noise_rel"]
    written: list[Path] = []
    slope_dir = out / "slope"
    slope_dir.mkdir(parents=True, exist_ok=True)

    disp_mm = np.linspace(0.0, syn["max_displacement_mm"], syn["samples"])
    for pretension in syn["pretensions_N"]:
        model = cfg.bls(pretension=pretension)
        label = f"synthetic-Ft{pretension:g}N"
        # the pulling weight on the tendon, in kg
        mass = pretension / 9.81
        for angle in syn["lateral_angles_deg"]:
            k_n_per_mm = lateral_stiffness_at(model, angle) * MM
            force = _noisy(k_n_per_mm * disp_mm, rel, rng)
            stem = f"{label}_a{angle:g}"
            csv = slope_dir / f"{stem}.csv"
            csv.write_text("displacement_mm,force_N\n"
                           + "".join(f"{_fmt(d)},{_fmt(f)}\n" for d, f in zip(disp_mm, force)))
            meta = {"bending_angle_deg": angle, "pulling_mass_kg": mass,
                    "pressure_step_kPa": 0.0, "label": label}
            sidecar = csv.with_suffix(".json")
            sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
            written += [csv, sidecar]

    model = cfg.bls()
    bls_rows = [a for a in syn["lateral_angles_deg"] if a > 0.0]
    ks = _noisy(np.array([lateral_stiffness_at(model, a) * MM for a in bls_rows]), rel, rng)
    path = out / "bls.csv"
    path.write_text("alpha_deg,stiffness_N_per_mm\n" + "".join(f"{_fmt(a)},{_fmt(k)}\n" for a, k in zip(bls_rows, ks)))
    written.append(path)

    stack = cfg.stack()
    pressures = syn["pressures_kPa"]
    moments = _noisy(np.array([withstand_moment(stack, p * KPA) for p in pressures]), rel, rng)
    path = out / "chambers.csv"
    path.write_text("pressure_kPa,moment_Nm\n" + "".join(f"{_fmt(p)},{_fmt(m)}\n" for p, m in zip(pressures, moments)))
    written.append(path)

    # inflate / deflate branches of a quadratic angle-pressure response; the deflate branch lags
    lines = ["pressure_kPa,angle_deg,branch"]
    for p in pressures:
        lines.append(f"{_fmt(p)},{_fmt(1.2 * p + 0.01 * p * p)},inflate")
    for p in reversed(pressures):
        lines.append(f"{_fmt(p)},{_fmt(4.0 + 1.25 * p + 0.01 * p * p)},deflate")
    path = out / "angle_pressure.csv"
    path.write_text("\n".join(lines) + "\n")
    written.append(path)
    return written
