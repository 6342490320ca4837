"""Quasi-static stiffness models for a bidirectional-stiffening soft actuator."""

from .bending import (
    MomentBalance,
    Regime,
    classify_regime,
    contact_moment,
    moment_balance,
    pressure_moment,
    stiffness_gain,
    withstand_moment,
)
from .core import (
    ArcState,
    BlsModel,
    ChamberStack,
    DomainError,
    LoadCase,
    Material,
    RectSection,
    derive_section,
    shear_modulus,
)
from .lateral import (
    LateralResult,
    SweepGrid,
    compliance_by_quadrature,
    evaluation_function,
    influence_bending,
    influence_torsion,
    lateral_stiffness,
    recommend_aspect_ratio,
    sweep_evaluation,
    working_condition,
)

__version__ = "0.1.0"
