"""Lateral stiffness of the bone-like structure.

The chain is idealised as a curved cantilever (circular arc of fixed length C,
centre angle alpha) loaded at the tip perpendicular to the bending plane. Tip
compliance follows from Castigliano's second theorem with bending and torsion
strain energy (shear neglected):

    1/k = C^3 / (4 E I) * [A_b(alpha) + E I / (G I_p) * A_t(alpha)]

With I_p = I (1 + lambda^2) the bracket depends on alpha, nu and lambda only,
and ``k = 4 E I / C^3 * F(alpha)``.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .core import BlsModel, DomainError, LoadCase, RectSection

# below this angle both influence functions are summed as Taylor series; the
# closed forms cancel catastrophically near 0 (torsion loses every digit at 1e-4)
SERIES_THRESHOLD = 1.0
_SERIES_TERMS = 20
# relative dip in F(alpha) still treated as "non-decreasing" by the recommender
MONOTONE_REL_TOL = 1e-3


def _check_angle(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha <= math.pi):
        raise DomainError("alpha", f"must lie in (0, pi], got {alpha!r}")
    return alpha


def _series_bending(a: float) -> float:
    # 2/a^2 - sin(2a)/a^3 = sum_{k>=1} (-1)^(k+1) 2^(2k+1) a^(2k-2) / (2k+1)!
    a2 = a * a
    total = 0.0
    for k in range(_SERIES_TERMS, 0, -1):
        total += (-1) ** (k + 1) * 2.0 ** (2 * k + 1) / math.factorial(2 * k + 1) * a2 ** (k - 1)
    return total


def _series_torsion(a: float) -> float:
    # 6/a^2 + (sin 2a - 8 sin a)/a^3 = sum_{k>=2} (-1)^k (2^(2k+1) - 8) a^(2k-2) / (2k+1)!
    a2 = a * a
    total = 0.0
    for k in range(_SERIES_TERMS, 1, -1):
        total += (-1) ** k * (2.0 ** (2 * k + 1) - 8.0) / math.factorial(2 * k + 1) * a2 ** (k - 1)
    return total


def influence_bending(alpha: float) -> float:
    """Bending share of the tip compliance, ``2/a^2 - sin(2a)/a^3``; 4/3 as a -> 0."""
    a = _check_angle(alpha)
    if a < SERIES_THRESHOLD:
        return _series_bending(a)
    return 2.0 / a**2 - math.sin(2.0 * a) / a**3


def influence_torsion(alpha: float) -> float:
    """Torsion share of the tip compliance, ``6/a^2 + sin(2a)/a^3 - 8 sin(a)/a^3``; ~a^2/5 near 0."""
    a = _check_angle(alpha)
    if a < SERIES_THRESHOLD:
        return _series_torsion(a)
    return 6.0 / a**2 + (math.sin(2.0 * a) - 8.0 * math.sin(a)) / a**3


def _check_nu_lambda(nu: float, aspect_ratio: float) -> None:
    if not (math.isfinite(nu) and 0.0 <= nu < 0.5):
        raise DomainError("poisson_ratio", f"must lie in [0, 0.5), got {nu!r}")
    if not (math.isfinite(aspect_ratio) and aspect_ratio > 0.0):
        raise DomainError("aspect_ratio", f"must be > 0, got {aspect_ratio!r}")


def evaluation_function(alpha: float, nu: float, aspect_ratio: float) -> float:
    _check_nu_lambda(nu, aspect_ratio)
    torsion_weight = 2.0 * (1.0 + nu) / (1.0 + aspect_ratio**2)
    return 1.0 / (influence_bending(alpha) + torsion_weight * influence_torsion(alpha))


@dataclass(frozen=True)
class LateralResult:
    alpha: float
    stiffness: float  # N/m
    evaluation: float
    a_bending: float
    a_torsion: float

    @property
    def stiffness_N_per_mm(self) -> float:
        return self.stiffness * 1e-3


def lateral_stiffness(model: BlsModel, alpha: float) -> LateralResult:
    nu = model.material.poisson_ratio
    lam = model.section.aspect_ratio
    a_b = influence_bending(alpha)
    a_t = influence_torsion(alpha)
    f = evaluation_function(alpha, nu, lam)
    k = 4.0 * model.flexural_scale * f
    return LateralResult(float(alpha), k, f, a_b, a_t)


def simpson(values: np.ndarray, step: float) -> float:
    """Composite Simpson rule over an odd number of equally spaced samples."""
    n = values.size - 1
    if n < 2 or n % 2:
        raise DomainError("panels", f"Simpson needs an even panel count, got {n}")
    return step / 3.0 * (values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum())


def compliance_by_quadrature(model: BlsModel, alpha: float, panels: int = 4096) -> float:
    """Tip stiffness (N/m) from numerically integrated strain energy.

    Independent of the closed form: integrates the bending and torsion moments
    along the arc and uses G and I_p directly. Since U is quadratic in the tip
    force, ``dU/dF`` per unit force is the integral of M^2 / (stiffness) with
    unit-force moments.
    """
    alpha = _check_angle(alpha)
    if int(panels) != panels or panels < 16:
        raise DomainError("panels", f"must be an integer >= 16, got {panels!r}")
    if panels % 2:
        raise DomainError("panels", f"must be even, got {panels!r}")
    radius = model.arc_length / alpha
    phi = np.linspace(0.0, alpha, int(panels) + 1)
    m_bend = radius * np.sin(alpha - phi)
    m_tors = radius * (1.0 - np.cos(alpha - phi))
    ei = model.material.young_modulus * model.section.inertia
    gip = model.material.shear_modulus * model.section.torsion_inertia
    step = alpha / panels
    # U = 1/(2EI) int M_b^2 R dphi + 1/(2GI_p) int M_t^2 R dphi, so dU/dF = 2U at F = 1
    compliance = radius * (simpson(m_bend**2, step) / ei + simpson(m_tors**2, step) / gip)
    return 1.0 / compliance


class WorkingCondition(NamedTuple):
    ok: bool
    margin: float  # N*m, F_t*h - F_ext*L


def working_condition(model: BlsModel, load: LoadCase) -> WorkingCondition:
    """The chain acts as a continuous beam while the tendon moment wins."""
    margin = model.pretension * model.structure_height - load.external_force * model.segment_length
    return WorkingCondition(margin >= 0.0, margin)


def _threads() -> int:
    raw = os.environ.get("BISA_MECH_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepGrid:
    alphas: tuple[float, ...]
    lambdas: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]  # values[i][j] = F(alphas[i], lambdas[j])
    nu: float = field(default=0.35)

    def row(self, aspect_ratio: float) -> list[float]:
        j = self.lambdas.index(aspect_ratio)
        return [r[j] for r in self.values]

    def to_csv(self) -> str:
        lines = ["alpha_deg," + ",".join(f"lambda={lam!r}" for lam in self.lambdas)]
        for alpha, row in zip(self.alphas, self.values):
            lines.append(",".join([repr(math.degrees(alpha))] + [repr(v) for v in row]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "nu": self.nu,
            "alpha_deg": [math.degrees(a) for a in self.alphas],
            "lambdas": list(self.lambdas),
            "evaluation": [list(r) for r in self.values],
        }
        return json.dumps(doc, indent=2) + "\n"


def sweep_evaluation(alphas: Sequence[float], lambdas: Sequence[float], nu: float = 0.35,
                     threads: int | None = None) -> SweepGrid:
    alphas = [float(a) for a in alphas]
    lambdas = [float(x) for x in lambdas]
    if not alphas:
        raise DomainError("alphas", "must not be empty")
    if not lambdas:
        raise DomainError("lambdas", "must not be empty")
    for a in alphas:
        _check_angle(a)
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise DomainError("alphas", "must be strictly increasing")
    for lam in lambdas:
        _check_nu_lambda(nu, lam)

    def row(alpha: float) -> tuple[float, ...]:
        return tuple(evaluation_function(alpha, nu, lam) for lam in lambdas)

    workers = threads or _threads()
    if workers > 1 and len(alphas) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(row, alphas))
    else:
        values = tuple(row(a) for a in alphas)
    return SweepGrid(tuple(alphas), tuple(lambdas), values, nu)


def degree_grid(lo: float, hi: float) -> list[float]:
    """Whole-degree samples in the half-open interval (lo, hi], both given in radians."""
    lo_deg = math.degrees(lo)
    hi_deg = math.degrees(hi)
    start = math.floor(lo_deg + 1e-9) + 1
    stop = math.floor(hi_deg + 1e-9)
    return [math.radians(d) for d in range(start, stop + 1)]


def max_relative_drop(values: Sequence[float]) -> float:
    """Largest fall below the running maximum, relative to that maximum."""
    peak = -math.inf
    drop = 0.0
    for v in values:
        peak = max(peak, v)
        drop = max(drop, (peak - v) / peak)
    return drop


@dataclass
class Recommendation:
    aspect_ratio: float | None
    accepted: list[float]
    rejected: list[tuple[float, str]]
    drops: dict[float, float]

    @property
    def found(self) -> bool:
        return self.aspect_ratio is not None


def recommend_aspect_ratio(candidates: Sequence[float], nu: float, b_max: float, width: float,
                           alpha_range: tuple[float, float] = (0.0, math.pi),
                           rel_tol: float = MONOTONE_REL_TOL) -> Recommendation:
    """Smallest aspect ratio whose F(alpha) does not decrease with bending.

    Candidates must fit the available envelope (``width`` and ``lambda*width``
    both <= ``b_max``). F is sampled on whole degrees of ``alpha_range``; a
    candidate passes when its largest dip below the running maximum is within
    ``rel_tol``. ``rel_tol=0`` demands strict monotonicity.
    """
    if not candidates:
        raise DomainError("candidates", "must not be empty")
    if not (math.isfinite(b_max) and b_max > 0.0):
        raise DomainError("b_max", f"must be > 0, got {b_max!r}")
    lo, hi = alpha_range
    grid = degree_grid(lo, min(hi, math.pi))
    if not grid:
        raise DomainError("alpha_range", "contains no whole-degree sample")

    accepted: list[float] = []
    rejected: list[tuple[float, str]] = []
    drops: dict[float, float] = {}
    for lam in sorted(set(float(c) for c in candidates)):
        section = RectSection(width, lam)
        if section.width > b_max or section.height > b_max:
            rejected.append((lam, f"section {section.width:.6g} x {section.height:.6g} m exceeds b_max {b_max:.6g} m"))
            continue
        drop = max_relative_drop([evaluation_function(a, nu, lam) for a in grid])
        drops[lam] = drop
        if drop > rel_tol:
            rejected.append((lam, f"F(alpha) decreases by {drop:.3%} over the range"))
        else:
            accepted.append(lam)
    return Recommendation(accepted[0] if accepted else None, accepted, rejected, drops)
