"""Reduction of bench measurements: stiffness slopes, stiffness ratios and
least-squares calibration of the lateral and bending models."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .core import GRAVITY, ChamberStack, DomainError
from .lateral import evaluation_function


@dataclass(frozen=True)
class SeriesMeta:
    bending_angle_deg: float = 0.0
    pulling_mass_kg: float = 0.0
    pressure_step_kPa: float = 0.0
    label: str = ""

    @property
    def pulling_force(self) -> float:
        return self.pulling_mass_kg * GRAVITY


@dataclass(frozen=True)
class ForceDispSeries:
    displacement: tuple[float, ...]  # m
    force: tuple[float, ...]  # N
    meta: SeriesMeta = field(default_factory=SeriesMeta)

    def __post_init__(self):
        d = tuple(float(v) for v in self.displacement)
        f = tuple(float(v) for v in self.force)
        if len(d) != len(f):
            raise DomainError("force", f"length {len(f)} != displacement length {len(d)}")
        if len(d) < 2:
            raise DomainError("displacement", "need at least 2 samples")
        if not all(math.isfinite(v) for v in d + f):
            raise DomainError("force", "samples must be finite")
        if any(b <= a for a, b in zip(d, d[1:])):
            raise DomainError("displacement", "must be strictly increasing")
        object.__setattr__(self, "displacement", d)
        object.__setattr__(self, "force", f)


@dataclass(frozen=True)
class SlopeFit:
    stiffness: float  # N/m
    intercept: float  # N
    r2: float

    @property
    def stiffness_N_per_mm(self) -> float:
        return self.stiffness * 1e-3


def fit_slope(series: ForceDispSeries) -> SlopeFit:
    """OLS slope of force against displacement with a free intercept."""
    x = np.asarray(series.displacement)
    y = np.asarray(series.force)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    if sxx == 0.0:
        raise DomainError("displacement", "has zero variance")
    slope = float(xc @ yc) / sxx
    intercept = float(y.mean() - slope * x.mean())
    ss_res = float(((yc - slope * xc) ** 2).sum())
    ss_tot = float(yc @ yc)
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return SlopeFit(slope, intercept, r2)


@dataclass(frozen=True)
class StiffnessRow:
    meta: SeriesMeta
    stiffness: float  # N/m
    r2: float
    source: str = ""


@dataclass
class StiffnessTable:
    rows: list[StiffnessRow] = field(default_factory=list)

    @classmethod
    def from_series(cls, series: Iterable[tuple[str, ForceDispSeries]]) -> StiffnessTable:
        rows = []
        for source, s in series:
            fit = fit_slope(s)
            rows.append(StiffnessRow(s.meta, fit.stiffness, fit.r2, source))
        return cls(rows)

    def to_csv(self) -> str:
        lines = ["label,bending_angle_deg,pulling_mass_kg,pressure_step_kPa,stiffness_N_per_mm,r2,source"]
        for r in self.rows:
            m = r.meta
            lines.append(f"{m.label},{m.bending_angle_deg!r},{m.pulling_mass_kg!r},"
                         f"{m.pressure_step_kPa!r},{r.stiffness * 1e-3!r},{r.r2!r},{r.source}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RatioCurve:
    angles: tuple[float, ...]  # deg
    ratios: tuple[float, ...]


def ratio_curve(table: StiffnessTable) -> dict[str, RatioCurve]:
    """Stiffness relative to the straight (0 deg) value, per condition label."""
    groups: dict[str, list[StiffnessRow]] = defaultdict(list)
    for row in table.rows:
        groups[row.meta.label].append(row)
    curves = {}
    for label in sorted(groups):
        rows = sorted(groups[label], key=lambda r: r.meta.bending_angle_deg)
        base = [r for r in rows if r.meta.bending_angle_deg == 0.0]
        if not base:
            raise DomainError("table", f"group {label!r} has no 0 deg baseline")
        if base[0].stiffness == 0.0:
            raise DomainError("table", f"group {label!r} has zero baseline stiffness")
        k0 = base[0].stiffness
        curves[label] = RatioCurve(tuple(r.meta.bending_angle_deg for r in rows),
                                   tuple(1.0 if r is base[0] else r.stiffness / k0 for r in rows))
    return curves


@dataclass(frozen=True)
class BlsCalibration:
    scale: float  # EI/C^3, N/m
    residual: float  # RMS of k_i - 4 s F_i, N/m
    nu: float
    aspect_ratio: float


def calibrate_bls(measured: Sequence[tuple[float, float]], nu: float, aspect_ratio: float) -> BlsCalibration:
    """One-parameter least squares for EI/C^3 given (alpha rad, k N/m) pairs."""
    if not measured:
        raise DomainError("measured", "must not be empty")
    f = np.array([evaluation_function(a, nu, aspect_ratio) for a, _ in measured])
    k = np.array([float(v) for _, v in measured])
    scale = float(k @ f) / (4.0 * float(f @ f))
    resid = k - 4.0 * scale * f
    return BlsCalibration(scale, float(np.sqrt((resid @ resid) / resid.size)), nu, aspect_ratio)


@dataclass(frozen=True)
class ChamberCalibration:
    coefficient: float  # c in M_f = c P - d, m^3
    restoring_moment: float  # M_w = d / (2(n-1)), N*m
    chamber_count: int
    residual: float  # RMS, N*m

    @property
    def unphysical(self) -> bool:
        return self.restoring_moment < 0.0 or self.coefficient < 0.0

    def to_stack(self, template: ChamberStack) -> ChamberStack:
        """Stack that reproduces this fit, keeping the template's wall geometry.

        The lumped coefficient is split as pressure part ``8(n-1) a b^2`` plus
        contact part ``(n-1) S_contact``; the contact part absorbs the rest.
        """
        n1 = self.chamber_count - 1
        wall = 8.0 * n1 * template.half_width * template.half_height**2
        contact = (self.coefficient - wall) / n1
        if contact < 0.0:
            raise DomainError("coefficient", f"{self.coefficient!r} is below the template wall term {wall!r}")
        return ChamberStack(
            half_width=template.half_width,
            half_height=template.half_height,
            chamber_count=self.chamber_count,
            contact_moment_area=contact,
            restoring_moment=max(self.restoring_moment, 0.0),
            tendon_critical_moment=template.tendon_critical_moment,
            calibrated=True,
        )


def calibrate_chambers(measured: Sequence[tuple[float, float]], chamber_count: int) -> ChamberCalibration:
    """Fit ``M_f = c P - d`` to (pressure Pa, withstand moment N*m) pairs."""
    if int(chamber_count) != chamber_count or chamber_count < 2:
        raise DomainError("chamber_count", f"must be an integer >= 2, got {chamber_count!r}")
    p = np.array([float(a) for a, _ in measured])
    m = np.array([float(b) for _, b in measured])
    if np.unique(p).size < 2:
        raise DomainError("measured", "need at least 2 distinct pressures")
    pc = p - p.mean()
    c = float(pc @ (m - m.mean())) / float(pc @ pc)
    d = float(c * p.mean() - m.mean())
    resid = m - (c * p - d)
    n1 = int(chamber_count) - 1
    return ChamberCalibration(c, d / (2.0 * n1), int(chamber_count), float(np.sqrt((resid @ resid) / resid.size)))


@dataclass(frozen=True)
class PolyFit:
    coefficients: tuple[float, ...]  # ascending powers of pressure (kPa) -> angle (deg)
    residual: float  # sum of squared residuals, deg^2
    samples: int

    def __call__(self, pressure_kPa: float) -> float:
        return float(np.polynomial.polynomial.polyval(pressure_kPa, self.coefficients))


def _polyfit(p: np.ndarray, a: np.ndarray, degree: int) -> PolyFit:
    vander = np.vander(p, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vander, a, rcond=None)
    resid = a - vander @ coef
    return PolyFit(tuple(float(c) for c in coef), float(resid @ resid), int(p.size))


def fit_angle_pressure(samples: Sequence[tuple], degree: int = 2) -> dict[str, PolyFit]:
    """Least-squares polynomial of bending angle against pressure.

    ``samples`` are ``(pressure_kPa, angle_deg)`` or ``(pressure_kPa,
    angle_deg, branch)``. Labeled branches (e.g. inflate / deflate) are fit
    separately; unlabeled samples go under ``"all"``.
    """
    if int(degree) != degree or not 1 <= degree <= 4:
        raise DomainError("degree", f"must be an integer in [1, 4], got {degree!r}")
    branches: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for s in samples:
        branch = s[2] if len(s) > 2 and s[2] else "all"
        branches[str(branch)].append((float(s[0]), float(s[1])))
    if not branches:
        raise DomainError("samples", "must not be empty")
    fits = {}
    for name in sorted(branches):
        pts = branches[name]
        p = np.array([v[0] for v in pts])
        if np.unique(p).size < degree + 1:
            raise DomainError("samples", f"branch {name!r} needs {degree + 1} distinct pressures for degree {degree}")
        fits[name] = _polyfit(p, np.array([v[1] for v in pts]), int(degree))
    return fits
