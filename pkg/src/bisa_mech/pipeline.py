"""Glue between the models and the CLI file formats.

Every number leaving this module carries its unit in the key or header.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Sequence

import jsonschema

from .bending import classify_regime, moment_balance
from .config import KPA, MM, RunConfig, report_schema
from .core import DomainError
from .datafit import (
    BlsCalibration,
    ChamberCalibration,
    SeriesMeta,
    StiffnessRow,
    StiffnessTable,
    calibrate_bls,
    calibrate_chambers,
    fit_angle_pressure,
    ratio_curve,
)
from .gripper import inverse_grasp_capacity, lift_capacity, normal_grasp_report
from .lateral import (
    influence_bending,
    influence_torsion,
    lateral_stiffness,
    max_relative_drop,
    recommend_aspect_ratio,
    sweep_evaluation,
    working_condition,
)
from .readers import read_angle_pressure, read_bls, read_chambers, read_series

FIT_KINDS = ("slope", "bls", "chambers", "angle-pressure")
REPORT_INPUTS = ("fit_slope.json", "fit_bls.json", "fit_chambers.json")


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _check_alphas_deg(alphas_deg: Sequence[float]) -> list[float]:
    if not alphas_deg:
        raise DomainError("alpha_range", "is empty")
    for a in alphas_deg:
        if not 0.0 < a <= 180.0:
            raise DomainError("alpha_range", f"angles must lie in (0, 180] deg, got {a!r}")
    return [math.radians(a) for a in alphas_deg]


def influence_csv(alphas_deg: Sequence[float]) -> str:
    lines = ["alpha_deg,A_bending,A_torsion"]
    for deg, a in zip(alphas_deg, _check_alphas_deg(alphas_deg)):
        lines.append(f"{deg!r},{influence_bending(a)!r},{influence_torsion(a)!r}")
    return "\n".join(lines) + "\n"


def write_sweep(alphas_deg: Sequence[float], lambdas: Sequence[float], nu: float, out: Path) -> list[Path]:
    alphas = _check_alphas_deg(alphas_deg)
    grid = sweep_evaluation(alphas, lambdas, nu)
    influence = influence_csv(alphas_deg)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "influence.csv", out / "evaluation.csv", out / "evaluation.json"]
    paths[0].write_text(influence)
    paths[1].write_text(grid.to_csv())
    paths[2].write_text(grid.to_json())
    return paths


def stiffness_lateral(cfg: RunConfig, alpha_deg: float) -> dict:
    if not 0.0 < alpha_deg <= 180.0:
        raise DomainError("alpha", f"must lie in (0, 180] deg, got {alpha_deg!r}")
    model = cfg.bls()
    res = lateral_stiffness(model, math.radians(alpha_deg))
    wc = working_condition(model, cfg.load_case())
    per_mm = cfg["units"]["stiffness"] == "N/mm"
    doc = {
        "mode": "lateral",
        "alpha_deg": alpha_deg,
        "evaluation_F": res.evaluation,
        "A_bending": res.a_bending,
        "A_torsion": res.a_torsion,
        "working_condition": {"ok": wc.ok, "margin_Nm": wc.margin,
                              "external_force_N": cfg.load_case().external_force},
        "regime": "valid" if wc.ok else "invalid regime",
    }
    doc["stiffness_N_per_mm" if per_mm else "stiffness_N_per_m"] = res.stiffness * (MM if per_mm else 1.0)
    return doc


def stiffness_bending(cfg: RunConfig, pressure_kPa: float, external_Nm: float | None = None) -> dict:
    stack = cfg.stack()
    bal = moment_balance(stack, pressure_kPa * KPA)
    doc = {
        "mode": "bending",
        "pressure_kPa": pressure_kPa,
        "chamber_count": bal.chamber_count,
        "pressure_moment_Nm": bal.pressure_moment,
        "contact_moment_Nm": bal.contact_moment,
        "restoring_moment_Nm": bal.restoring_moment,
        "withstand_moment_Nm": bal.external_moment,
        "balance_residual_Nm": bal.residual,
        "tendon_critical_moment_Nm": stack.tendon_critical_moment,
        "pre_contact": bal.pre_contact,
    }
    if external_Nm is not None:
        doc["external_moment_Nm"] = external_Nm
        doc["regime"] = classify_regime(external_Nm, stack, pressure_kPa * KPA).value
    return doc


def _table_payload(table: StiffnessTable) -> dict:
    return {
        "kind": "slope",
        "rows": [
            {
                "label": r.meta.label,
                "bending_angle_deg": r.meta.bending_angle_deg,
                "pulling_mass_kg": r.meta.pulling_mass_kg,
                "pressure_step_kPa": r.meta.pressure_step_kPa,
                "stiffness_N_per_mm": r.stiffness * MM,
                "r2": r.r2,
                "source": r.source,
            }
            for r in table.rows
        ],
    }


def table_from_payload(doc: dict) -> StiffnessTable:
    rows = []
    for r in doc["rows"]:
        meta = SeriesMeta(r["bending_angle_deg"], r["pulling_mass_kg"], r["pressure_step_kPa"], r["label"])
        rows.append(StiffnessRow(meta, r["stiffness_N_per_mm"] / MM, r["r2"], r["source"]))
    return StiffnessTable(rows)


def fit_files(kind: str, files: Sequence[Path], cfg: RunConfig, degree: int = 2) -> tuple[dict, str]:
    """Run one fit over ``files``; returns (JSON payload, CSV table)."""
    if kind not in FIT_KINDS:
        raise DomainError("kind", f"must be one of {FIT_KINDS}, got {kind!r}")
    if not files:
        raise DomainError("files", "no input files")
    # lexicographic merge order keeps output independent of argument order
    files = sorted(Path(f) for f in files)
    if kind == "slope":
        table = StiffnessTable.from_series((f.name, read_series(f)) for f in files)
        return _table_payload(table), table.to_csv()
    if kind == "bls":
        measured = [m for f in files for m in read_bls(f)]
        nu = cfg["material"]["poisson_ratio"]
        lam = cfg["section"]["aspect_ratio"]
        cal = calibrate_bls(measured, nu, lam)
        doc = {
            "kind": "bls",
            "flexural_scale_N_per_m": cal.scale,
            "residual_rms_N_per_m": cal.residual,
            "nu": nu,
            "aspect_ratio": lam,
            "samples": len(measured),
        }
        csv = "flexural_scale_N_per_m,residual_rms_N_per_m,nu,aspect_ratio\n" \
              f"{cal.scale!r},{cal.residual!r},{nu!r},{lam!r}\n"
        return doc, csv
    if kind == "chambers":
        measured = [m for f in files for m in read_chambers(f)]
        n = cfg["chambers"]["chamber_count"]
        cal = calibrate_chambers(measured, n)
        doc = {
            "kind": "chambers",
            "coefficient_m3": cal.coefficient,
            "restoring_moment_Nm": cal.restoring_moment,
            "chamber_count": cal.chamber_count,
            "residual_rms_Nm": cal.residual,
            "unphysical": cal.unphysical,
            "samples": len(measured),
        }
        csv = "coefficient_m3,restoring_moment_Nm,chamber_count,residual_rms_Nm\n" \
              f"{cal.coefficient!r},{cal.restoring_moment!r},{cal.chamber_count},{cal.residual!r}\n"
        return doc, csv
    samples = [s for f in files for s in read_angle_pressure(f)]
    fits = fit_angle_pressure(samples, degree)
    doc = {
        "kind": "angle-pressure",
        "degree": degree,
        "branches": {
            name: {"coefficients_deg_per_kPa_pow": list(fit.coefficients),
                   "residual_ss_deg2": fit.residual, "samples": fit.samples}
            for name, fit in fits.items()
        },
    }
    lines = ["branch,power,coefficient"]
    for name, fit in fits.items():
        lines += [f"{name},{i},{c!r}" for i, c in enumerate(fit.coefficients)]
    return doc, "\n".join(lines) + "\n"


def _load_fit(path: Path, kind: str) -> dict:
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DomainError(str(path), f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("kind") != kind:
        raise DomainError(str(path), f"expected a {kind!r} fit result")
    return doc


def build_report(cfg: RunConfig, data_dir: Path) -> dict:
    """Combine calibrations, sweep summary, ratio curves and gripper capacities."""
    data_dir = Path(data_dir)
    missing = [name for name in REPORT_INPUTS if not (data_dir / name).is_file()]
    if missing:
        raise DomainError("data_dir", f"{data_dir} is missing: {', '.join(missing)}")
    slope = _load_fit(data_dir / "fit_slope.json", "slope")
    bls_fit = _load_fit(data_dir / "fit_bls.json", "bls")
    ch_fit = _load_fit(data_dir / "fit_chambers.json", "chambers")
    ap_path = data_dir / "fit_angle-pressure.json"
    ap_fit = _load_fit(ap_path, "angle-pressure") if ap_path.is_file() else None

    sweep = cfg["sweep"]
    nu = sweep["nu"]
    alphas_deg = cfg.alpha_range_deg()
    alphas = _check_alphas_deg(alphas_deg)
    grid = sweep_evaluation(alphas, sweep["lambdas"], nu)
    summaries = []
    for j, lam in enumerate(grid.lambdas):
        row = [r[j] for r in grid.values]
        drop = max_relative_drop(row)
        summaries.append({
            "lambda": lam,
            "F_min": min(row),
            "F_max": max(row),
            "F_first": row[0],
            "F_last": row[-1],
            "max_relative_drop": drop,
            "strictly_non_decreasing": drop == 0.0,
        })
    rec = recommend_aspect_ratio(sweep["candidates"], nu, sweep["b_max_mm"] * MM, cfg.section().width,
                                 (math.radians(alphas_deg[0] - 1.0), math.radians(alphas_deg[-1])))

    bls_cal = BlsCalibration(bls_fit["flexural_scale_N_per_m"], bls_fit["residual_rms_N_per_m"],
                             bls_fit["nu"], bls_fit["aspect_ratio"])
    model = cfg.bls().with_flexural_scale(bls_cal.scale)
    ch_cal = ChamberCalibration(ch_fit["coefficient_m3"], ch_fit["restoring_moment_Nm"],
                                ch_fit["chamber_count"], ch_fit["residual_rms_Nm"])
    stack = ch_cal.to_stack(cfg.stack())
    gripper = cfg.gripper(model, stack)
    g = cfg["gripper"]
    lift = lift_capacity(gripper, math.radians(g["lift_angle_deg"]))
    grasp = normal_grasp_report(gripper, g["base_pressure_kPa"] * KPA, g["delta_pressure_kPa"] * KPA)
    normal = g["normal_force_per_finger_N"]

    curves = ratio_curve(table_from_payload(slope))
    report = {
        "schema": "bisa-mech-report/1",
        "data_origin": "synthetic" if all(r["label"].startswith("synthetic") for r in slope["rows"]) else "measured",
        "calibration": {
            "bls": {
                "flexural_scale_N_per_m": bls_cal.scale,
                "residual_rms_N_per_m": bls_cal.residual,
                "young_modulus_effective_Pa": model.material.young_modulus,
            },
            "chambers": {
                "coefficient_m3": ch_cal.coefficient,
                "restoring_moment_Nm": ch_cal.restoring_moment,
                "contact_moment_area_m3": stack.contact_moment_area,
                "residual_rms_Nm": ch_cal.residual,
                "unphysical": ch_cal.unphysical,
            },
            "angle_pressure": ap_fit["branches"] if ap_fit else None,
        },
        "sweep": {
            "nu": nu,
            "alpha_first_deg": alphas_deg[0],
            "alpha_last_deg": alphas_deg[-1],
            "alpha_count": len(alphas_deg),
            "lambdas": summaries,
            "recommendation": {
                "aspect_ratio": rec.aspect_ratio,
                "accepted": rec.accepted,
                "rejected": [{"lambda": lam, "reason": why} for lam, why in rec.rejected],
            },
        },
        "lateral": {
            "alpha_deg": [a for a in (15.0, 45.0, 90.0, 135.0, 180.0)],
            "stiffness_N_per_mm": [lateral_stiffness(model, math.radians(a)).stiffness * MM
                                   for a in (15.0, 45.0, 90.0, 135.0, 180.0)],
        },
        "ratio_curves": {
            label: {"angle_deg": list(c.angles), "ratio": list(c.ratios)} for label, c in curves.items()
        },
        "gripper": {
            "finger_count": gripper.finger_count,
            "lift": {"alpha_deg": g["lift_angle_deg"], "force_N": lift.force, "valid": lift.valid,
                     "allowable_deflection_mm": g["allowable_deflection_mm"]},
            "inverse_grasp": {
                "normal_force_per_finger_N": normal,
                "cylindrical_N": inverse_grasp_capacity(gripper, "cylindrical", normal),
                "reduced_N": inverse_grasp_capacity(gripper, "reduced", normal),
            },
            "normal_grasp": {
                "base_pressure_kPa": g["base_pressure_kPa"],
                "delta_pressure_kPa": g["delta_pressure_kPa"],
                "aggregate_gain": grasp.aggregate_gain,
                "per_finger_gain": [r.gain for r in grasp.per_finger],
                "status": grasp.status,
            },
        },
    }
    jsonschema.validate(report, report_schema())
    return report
