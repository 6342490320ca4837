"""Static capacity estimates for the multi-finger gripper.

Fingers act as parallel springs. None of these are force balances of the
real hardware; they compose the per-finger models.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .bending import GainResult, stiffness_gain, withstand_moment
from .core import BlsModel, ChamberStack, DomainError, LoadCase, _finite, _non_negative
from .lateral import lateral_stiffness, working_condition


@dataclass(frozen=True)
class Finger:
    bls: BlsModel
    stack: ChamberStack


@dataclass(frozen=True)
class GripperConfig:
    fingers: tuple[Finger, ...]
    friction_coefficient: float = 0.5
    allowable_deflection: float = 5e-3  # m
    mount_tilt_deg: float = 15.0  # recorded only, not used by the capacity models
    tendon_limit: float = math.inf  # N, cap on inverse-grasp force

    def __post_init__(self):
        object.__setattr__(self, "fingers", tuple(self.fingers))
        if len(self.fingers) < 2:
            raise DomainError("finger_count", f"must be >= 2, got {len(self.fingers)}")
        _non_negative("friction_coefficient", self.friction_coefficient)
        _non_negative("allowable_deflection", self.allowable_deflection)
        _finite("mount_tilt_deg", self.mount_tilt_deg)
        if math.isnan(self.tendon_limit) or self.tendon_limit < 0.0:
            raise DomainError("tendon_limit", f"must be >= 0, got {self.tendon_limit!r}")

    @classmethod
    def uniform(cls, finger_count: int, bls: BlsModel, stack: ChamberStack, **kw) -> GripperConfig:
        return cls(tuple(Finger(bls, stack) for _ in range(int(finger_count))), **kw)

    @property
    def finger_count(self) -> int:
        return len(self.fingers)


@dataclass(frozen=True)
class LiftResult:
    force: float  # N
    per_finger: tuple[float, ...]
    valid: bool  # every finger satisfies the tendon working condition at its share


def lift_capacity(config: GripperConfig, alpha: float) -> LiftResult:
    """Lateral load carried at the allowable deflection, summed over fingers."""
    per_finger = []
    valid = True
    for finger in config.fingers:
        share = lateral_stiffness(finger.bls, alpha).stiffness * config.allowable_deflection
        per_finger.append(share)
        valid = valid and working_condition(finger.bls, LoadCase(external_force=share)).ok
    return LiftResult(math.fsum(per_finger), tuple(per_finger), valid)


class GraspShape(str, enum.Enum):
    CYLINDRICAL = "cylindrical"
    REDUCED = "reduced"


def inverse_grasp_capacity(config: GripperConfig, shape: GraspShape | str, normal_force_per_finger: float) -> float:
    """Holding force when grasping an object from the inside.

    A smooth bore holds only by friction; a reducing bore interlocks and takes
    the full normal force (an upper bound).
    """
    shape = GraspShape(shape)
    normal = _non_negative("normal_force_per_finger", normal_force_per_finger)
    if shape is GraspShape.CYLINDRICAL:
        force = config.finger_count * config.friction_coefficient * normal
    else:
        force = config.finger_count * normal
    return min(force, config.tendon_limit)


@dataclass
class GraspReport:
    per_finger: list[GainResult]
    aggregate_gain: float | None
    base_moment: float  # N*m, summed over fingers
    raised_moment: float
    status: str = field(default="uncalibrated model estimate")


def normal_grasp_report(config: GripperConfig, base_pressure: float, delta_pressure: float) -> GraspReport:
    per_finger = [stiffness_gain(base_pressure, delta_pressure, f.stack) for f in config.fingers]
    base = math.fsum(withstand_moment(f.stack, base_pressure) for f in config.fingers)
    raised = math.fsum(withstand_moment(f.stack, base_pressure + delta_pressure) for f in config.fingers)
    calibrated = all(g.calibrated for g in per_finger)
    return GraspReport(
        per_finger,
        raised / base if base > 0.0 else None,
        base,
        raised,
        "calibrated model estimate" if calibrated else "uncalibrated model estimate",
    )

