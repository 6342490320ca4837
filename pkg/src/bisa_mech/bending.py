"""Air-tendon bending stiffness: quasi-static moment balance over the chamber stack.

Once the external moment exceeds the tendon's critical moment the tendon goes
slack and the stack deflects. Moments then balance across the n-1 chamber
interfaces:

    2(n-1) M_p + (n-1) M_c = 2(n-1) M_w + M_f

with M_p = 4 P a b^2 (pressure on a 2a x 2b wall, lever arm b) and
M_c = P * S_contact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import ChamberStack, DomainError, _finite, _non_negative


class Regime(str, enum.Enum):
    TENDON_TAUT = "tendon-taut"
    QUASISTATIC = "quasistatic-deflection"
    OVERLOAD = "overload"


@dataclass(frozen=True)
class MomentBalance:
    pressure_moment: float
    contact_moment: float
    restoring_moment: float
    external_moment: float  # withstand moment M_f, clamped at 0
    chamber_count: int
    pre_contact: bool = False

    @property
    def residual(self) -> float:
        n1 = self.chamber_count - 1
        return (2 * n1 * self.pressure_moment + n1 * self.contact_moment
                - 2 * n1 * self.restoring_moment - self.external_moment)


def pressure_moment(stack: ChamberStack, pressure: float) -> float:
    pressure = _non_negative("pressure", pressure)
    return 4.0 * pressure * stack.half_width * stack.half_height**2


def contact_moment(stack: ChamberStack, pressure: float) -> float:
    pressure = _non_negative("pressure", pressure)
    return pressure * stack.contact_moment_area


def balance(chamber_count: int, m_p: float, m_c: float, m_w: float) -> MomentBalance:
    """Solve the balance for the external moment from per-chamber moments."""
    if int(chamber_count) != chamber_count or chamber_count < 2:
        raise DomainError("chamber_count", f"must be an integer >= 2, got {chamber_count!r}")
    for name, value in (("pressure_moment", m_p), ("contact_moment", m_c), ("restoring_moment", m_w)):
        _non_negative(name, value)
    n1 = int(chamber_count) - 1
    m_f = 2 * n1 * m_p + n1 * m_c - 2 * n1 * m_w
    # no positive capacity yet: chambers are not pressed against each other
    if m_f <= 0.0:
        return MomentBalance(m_p, m_c, m_w, 0.0, int(chamber_count), pre_contact=True)
    return MomentBalance(m_p, m_c, m_w, m_f, int(chamber_count))


def moment_balance(stack: ChamberStack, pressure: float) -> MomentBalance:
    return balance(stack.chamber_count, pressure_moment(stack, pressure),
                   contact_moment(stack, pressure), stack.restoring_moment)


def withstand_moment(stack: ChamberStack, pressure: float) -> float:
    return moment_balance(stack, pressure).external_moment


def classify_regime(external: float, stack: ChamberStack, pressure: float) -> Regime:
    external = _non_negative("external", external)
    if external < stack.tendon_critical_moment:
        return Regime.TENDON_TAUT
    if external <= withstand_moment(stack, pressure):
        return Regime.QUASISTATIC
    return Regime.OVERLOAD


@dataclass(frozen=True)
class GainResult:
    gain: float | None  # None when the base withstand moment is zero
    base_moment: float
    raised_moment: float
    calibrated: bool

    @property
    def defined(self) -> bool:
        return self.gain is not None


def stiffness_gain(base_pressure: float, delta_pressure: float, stack: ChamberStack) -> GainResult:
    """Ratio of withstand moments after raising the pressure by ``delta_pressure``."""
    base_pressure = _finite("base_pressure", base_pressure)
    if base_pressure <= 0.0:
        raise DomainError("base_pressure", f"must be > 0, got {base_pressure!r}")
    delta_pressure = _non_negative("delta_pressure", delta_pressure)
    base = withstand_moment(stack, base_pressure)
    raised = withstand_moment(stack, base_pressure + delta_pressure)
    gain = raised / base if base > 0.0 else None
    return GainResult(gain, base, raised, stack.calibrated)
