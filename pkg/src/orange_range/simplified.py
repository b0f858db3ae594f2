"""Closed-form range model for steady motion on a constant grade."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import (
    AncillaryPowerModel,
    BatteryModel,
    InvalidParameterError,
    RobotParams,
    Unbounded,
)


@dataclass(frozen=True)
class SimplifiedMission:
    """Steady mission on a plane of constant elevation.

    ``velocity_mps`` is used for energy-per-distance queries, ``v_opt_mps``
    is the cruise speed at which :func:`max_range` is evaluated.
    """

    grade_theta_rad: float = 0.0
    velocity_mps: float = 1.0
    v_opt_mps: float = 1.0
    duty_cycle: float = 1.0
    distance_m: float | None = None

    def __post_init__(self):
        for name in ("grade_theta_rad", "velocity_mps", "v_opt_mps", "duty_cycle"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if not abs(self.grade_theta_rad) < math.pi / 2:
            raise InvalidParameterError("grade must satisfy |theta| < pi/2")
        if self.velocity_mps <= 0 or self.v_opt_mps <= 0:
            raise InvalidParameterError("velocities must be positive")
        if not 0.0 < self.duty_cycle <= 1.0:
            raise InvalidParameterError("duty cycle must lie in (0, 1]")
        if self.distance_m is not None and not self.distance_m >= 0:
            raise InvalidParameterError("distance must be non-negative")

    def at_operating_point(self) -> "SimplifiedMission":
        """Same mission with the query velocity set to the cruise speed."""
        return replace(self, velocity_mps=self.v_opt_mps)


def _gravity_terms(r: RobotParams, theta: float) -> tuple[float, float]:
    weight = r.weight_n
    rolling = r.c_rr * weight * math.cos(theta)
    grade = weight * math.sin(theta)
    return rolling, grade


def static_force(r: RobotParams, theta: float) -> float:
    """Velocity-independent part of the traction force (rolling + grade)."""
    rolling, grade = _gravity_terms(r, theta)
    return rolling + grade


def traction_force(r: RobotParams, m: SimplifiedMission, velocity: float | None = None) -> float:
    """Steady traction force ``C_rr*N + c*v^2 + W*sin(theta)`` in newtons.

    ``velocity`` defaults to the mission's query velocity.
    """
    v = m.velocity_mps if velocity is None else velocity
    return static_force(r, m.grade_theta_rad) + r.drag_coeff * v * v


def maneuvering_energy(r: RobotParams, m: SimplifiedMission, d: float) -> float:
    """Mechanical work against the resistive forces over ``d`` metres.

    May be negative on a steep enough downhill; nothing is clamped here.
    """
    if not d >= 0:
        raise InvalidParameterError("distance must be non-negative")
    return traction_force(r, m) * d


def energy_breakdown(
    r: RobotParams,
    a: AncillaryPowerModel,
    m: SimplifiedMission,
    d: float,
) -> tuple[float, float]:
    """Return ``(ancillary_energy, traversal_energy)`` for covering ``d``."""
    if not d >= 0:
        raise InvalidParameterError("distance must be non-negative")
    mean_speed = m.velocity_mps * m.duty_cycle
    if mean_speed <= 0:
        raise InvalidParameterError("velocity * duty cycle must be positive")
    ae = a.total_power * d / mean_speed
    te = maneuvering_energy(r, m, d) / r.omega_man
    return ae, te


def total_energy_for_distance(
    r: RobotParams,
    b: BatteryModel,
    a: AncillaryPowerModel,
    m: SimplifiedMission,
    d: float,
) -> float:
    """Battery energy needed to cover ``d`` metres: ancillary plus traversal.

    ``b`` is accepted for signature symmetry with :func:`max_range`; the
    energy demand does not depend on the battery.
    """
    ae, te = energy_breakdown(r, a, m, d)
    return ae + te


def energy_per_metre(r: RobotParams, a: AncillaryPowerModel, m: SimplifiedMission) -> float:
    """Denominator of the range formula, evaluated at the cruise speed."""
    ancillary = a.total_power / (m.v_opt_mps * m.duty_cycle)
    return ancillary + traction_force(r, m, m.v_opt_mps) / r.omega_man


def max_range(
    r: RobotParams,
    b: BatteryModel,
    a: AncillaryPowerModel,
    m: SimplifiedMission,
) -> float | Unbounded:
    """Distance at which the effective battery energy is used up.

    Returns :class:`Unbounded` when energy per metre is not positive, which
    happens with no ancillary draw and zero or negative net resistance.
    """
    per_metre = energy_per_metre(r, a, m)
    if not per_metre > 0:
        return Unbounded("energy per metre is not positive: no resistance and no ancillary draw")
    return b.effective_energy / per_metre
