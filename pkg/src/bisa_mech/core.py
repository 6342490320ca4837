"""Shared value types for the actuator model.

Everything is strict SI internally (m, N, Pa, rad). Unit conversion
happens only at the CLI / config boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

# pulling loads are reported in kg
GRAVITY = 9.81


class DomainError(ValueError):
    """Input outside the domain of a model operation."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(name, f"must be finite, got {value!r}")
    return value


def _positive(name: str, value: float) -> float:
    value = _finite(name, value)
    if value <= 0.0:
        raise DomainError(name, f"must be > 0, got {value!r}")
    return value


def _non_negative(name: str, value: float) -> float:
    value = _finite(name, value)
    if value < 0.0:
        raise DomainError(name, f"must be >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class Material:
    """Isotropic linear-elastic material (E in Pa)."""

    young_modulus: float
    poisson_ratio: float

    def __post_init__(self):
        _positive("young_modulus", self.young_modulus)
        nu = _finite("poisson_ratio", self.poisson_ratio)
        if not 0.0 <= nu < 0.5:
            raise DomainError("poisson_ratio", f"must lie in [0, 0.5), got {nu!r}")

    @property
    def shear_modulus(self) -> float:
        return shear_modulus(self)


def shear_modulus(material: Material) -> float:
    return material.young_modulus / (2.0 * (1.0 + material.poisson_ratio))


@dataclass(frozen=True)
class RectSection:
    """Rectangular cross-section of width ``b`` and height ``aspect_ratio * b``.

    The torsion inertia uses the polar approximation ``I_p = I (1 + lambda^2)``.
    It is what makes the lateral-stiffness evaluation function dimensionless in
    the aspect ratio alone. The true Saint-Venant constant of a rectangle is
    smaller; see ``README.md``.
    """

    width: float
    aspect_ratio: float
    height: float = field(init=False)
    inertia: float = field(init=False)
    torsion_inertia: float = field(init=False)

    def __post_init__(self):
        b = _positive("width", self.width)
        lam = _positive("aspect_ratio", self.aspect_ratio)
        inertia = lam * b**4 / 12.0
        object.__setattr__(self, "height", lam * b)
        object.__setattr__(self, "inertia", inertia)
        object.__setattr__(self, "torsion_inertia", inertia * (1.0 + lam * lam))


def derive_section(width: float, aspect_ratio: float) -> RectSection:
    return RectSection(width, aspect_ratio)


@dataclass(frozen=True)
class BlsModel:
    """One bone-like structure: a tendon-threaded segment chain treated as a
    continuous curved cantilever of fixed arc length.

    arc_length          C, m (invariant under bending)
    structure_height    h, tendon lever arm of the working condition, m
    segment_length      L, lever arm of the external load, m
    pretension          F_t, tendon pull, N
    """

    material: Material
    section: RectSection
    arc_length: float
    structure_height: float
    segment_length: float
    segment_count: int
    pretension: float = 0.0
    calibrated: bool = False

    def __post_init__(self):
        _positive("arc_length", self.arc_length)
        _positive("structure_height", self.structure_height)
        _positive("segment_length", self.segment_length)
        _non_negative("pretension", self.pretension)
        if int(self.segment_count) != self.segment_count or self.segment_count < 2:
            raise DomainError("segment_count", f"must be an integer >= 2, got {self.segment_count!r}")

    @property
    def flexural_scale(self) -> float:
        """EI/C^3 in N/m."""
        return self.material.young_modulus * self.section.inertia / self.arc_length**3

    def with_flexural_scale(self, scale: float) -> BlsModel:
        """Copy with E rescaled so that EI/C^3 equals ``scale``."""
        scale = _positive("scale", scale)
        modulus = scale * self.arc_length**3 / self.section.inertia
        return replace(self, material=replace(self.material, young_modulus=modulus), calibrated=True)


@dataclass(frozen=True)
class ChamberStack:
    """Pneumatic chamber stack of the air-tendon bending model.

    ``contact_moment_area`` is the effective first moment of the contact
    area (m^3), so that ``P * contact_moment_area`` is a moment in N*m.
    """

    half_width: float
    half_height: float
    chamber_count: int = 9
    contact_moment_area: float = 0.0
    restoring_moment: float = 0.0
    tendon_critical_moment: float = 0.0
    calibrated: bool = False

    def __post_init__(self):
        if int(self.chamber_count) != self.chamber_count or self.chamber_count < 2:
            raise DomainError("chamber_count", f"must be an integer >= 2, got {self.chamber_count!r}")
        _positive("half_width", self.half_width)
        _positive("half_height", self.half_height)
        _non_negative("contact_moment_area", self.contact_moment_area)
        _non_negative("restoring_moment", self.restoring_moment)
        _non_negative("tendon_critical_moment", self.tendon_critical_moment)


@dataclass(frozen=True)
class ArcState:
    """Constant-curvature pose. ``radius`` is infinite for a straight beam."""

    angle: float
    radius: float

    def __post_init__(self):
        _non_negative("angle", self.angle)
        if math.isnan(self.radius) or self.radius <= 0.0:
            raise DomainError("radius", f"must be > 0, got {self.radius!r}")
        if self.angle > 0.0 and math.isinf(self.radius):
            raise DomainError("radius", "must be finite for a bent arc")

    @classmethod
    def from_angle(cls, angle: float, arc_length: float) -> ArcState:
        _positive("arc_length", arc_length)
        angle = _non_negative("angle", angle)
        return cls(angle, arc_length / angle if angle > 0.0 else math.inf)

    @property
    def arc_length(self) -> float:
        return self.radius * self.angle if self.angle > 0.0 else math.nan


@dataclass(frozen=True)
class LoadCase:
    external_force: float = 0.0
    pressure: float = 0.0

    def __post_init__(self):
        _non_negative("external_force", self.external_force)
        _non_negative("pressure", self.pressure)
