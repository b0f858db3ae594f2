"""Shared physical types: robot, losses, battery decay and ancillary power.

All types are frozen dataclasses validated on construction. The helper
functions at the bottom are thin wrappers kept for a functional call style.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

GRAVITY = 9.81


class InvalidParameterError(ValueError):
    """Raised when a model parameter violates its physical constraints."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParameterError(msg)


def _finite(value: float, name: str) -> None:
    _require(isinstance(value, (int, float)) and math.isfinite(value), f"{name} must be a finite number, got {value!r}")


@dataclass(frozen=True)
class LossFractions:
    """The four loss groups of a robot, each a fraction in [0, 1).

    Efficiencies compose multiplicatively: a loss fraction ``eta`` leaves
    ``1 - eta`` of the energy flowing through that stage.
    """

    eta1_battery: float = 0.0
    eta2_drive_motor: float = 0.0
    eta3_mechanical: float = 0.0
    eta4_ancillary: float = 0.0

    def __post_init__(self):
        for name in ("eta1_battery", "eta2_drive_motor", "eta3_mechanical", "eta4_ancillary"):
            value = getattr(self, name)
            _finite(value, name)
            _require(0.0 <= value < 1.0, f"{name} must lie in [0, 1), got {value}")

    @property
    def maneuvering_efficiency(self) -> float:
        return (1.0 - self.eta2_drive_motor) * (1.0 - self.eta3_mechanical)

    @property
    def system_efficiency(self) -> float:
        return (
            (1.0 - self.eta1_battery)
            * (1.0 - self.eta2_drive_motor)
            * (1.0 - self.eta3_mechanical)
            * (1.0 - self.eta4_ancillary)
        )

    @classmethod
    def from_maneuvering_efficiency(cls, omega_man: float) -> "LossFractions":
        """Lossy inverse: put the whole drivetrain loss into the drive motor."""
        _require(0.0 < omega_man <= 1.0, f"maneuvering efficiency must lie in (0, 1], got {omega_man}")
        return cls(eta2_drive_motor=1.0 - omega_man)


@dataclass(frozen=True)
class RobotParams:
    mass_kg: float
    c_rr: float
    drag_coeff: float
    losses: LossFractions = LossFractions()
    gravity_mps2: float = GRAVITY

    def __post_init__(self):
        for name in ("mass_kg", "c_rr", "drag_coeff", "gravity_mps2"):
            _finite(getattr(self, name), name)
        _require(self.mass_kg > 0, "mass_kg must be positive")
        _require(self.gravity_mps2 > 0, "gravity_mps2 must be positive")
        _require(self.c_rr >= 0, "c_rr must be non-negative")
        _require(self.drag_coeff >= 0, "drag_coeff must be non-negative")
        _require(isinstance(self.losses, LossFractions), "losses must be a LossFractions")

    @property
    def weight_n(self) -> float:
        return self.mass_kg * self.gravity_mps2

    @property
    def omega_man(self) -> float:
        return self.losses.maneuvering_efficiency


@dataclass(frozen=True)
class BatteryModel:
    """Rated pack energy with separable exponential cycle/age decay.

    ``age_days`` and ``k2`` share the day as time unit.
    """

    rated_energy_j: float
    k1: float = 0.0
    k2: float = 0.0
    cycles: float = 0.0
    age_days: float = 0.0

    def __post_init__(self):
        for name in ("rated_energy_j", "k1", "k2", "cycles", "age_days"):
            _finite(getattr(self, name), name)
        _require(self.rated_energy_j >= 0, "rated_energy_j must be non-negative")
        _require(self.k1 >= 0, "k1 must be non-negative")
        _require(self.k2 >= 0, "k2 must be non-negative")
        _require(self.cycles >= 0, "cycles must be non-negative")
        _require(self.age_days >= 0, "age_days must be non-negative")

    @property
    def decay_factor(self) -> float:
        return math.exp(-(self.k1 * self.cycles + self.k2 * self.age_days))

    @property
    def effective_energy(self) -> float:
        return self.rated_energy_j * self.decay_factor


@dataclass(frozen=True)
class AncillaryPowerModel:
    """Sensing power linear in sensor frequency, plus compute and comms draw.

    With ``p_comp_w == p_comm_w == 0`` this is the sensing-only model.
    Heat losses in drivers and electronics are assumed to be already inside
    the measured values.
    """

    s0_w: float = 0.0
    s1_w_per_hz: float = 0.0
    f_s_hz: float = 0.0
    p_comp_w: float = 0.0
    p_comm_w: float = 0.0

    def __post_init__(self):
        for name in ("s0_w", "s1_w_per_hz", "f_s_hz", "p_comp_w", "p_comm_w"):
            value = getattr(self, name)
            _finite(value, name)
            _require(value >= 0, f"{name} must be non-negative, got {value}")

    @property
    def sensing_power(self) -> float:
        return self.s0_w + self.s1_w_per_hz * self.f_s_hz

    @property
    def total_power(self) -> float:
        return self.sensing_power + self.p_comp_w + self.p_comm_w


@dataclass(frozen=True)
class TelemetrySample:
    """One telemetry record.

    ``power_w`` is the mean electrical power over the interval since the
    previous sample, so ``power_w * dt`` is that interval's energy.
    """

    t_s: float
    x_m: float
    v_mps: float
    power_w: float
    moving: bool


@dataclass(frozen=True)
class Unbounded:
    """Range result when energy never runs out under the model.

    ``domain_limit_m`` is set when the answer is only "unbounded within the
    provided force profile", i.e. the profile ended before the battery did.
    """

    reason: str
    domain_limit_m: float | None = None

    def to_dict(self) -> dict:
        return {"unbounded": True, "reason": self.reason, "domain_limit_m": self.domain_limit_m}


def effective_energy(b: BatteryModel) -> float:
    return b.effective_energy


def ancillary_power(a: AncillaryPowerModel) -> float:
    return a.total_power


def maneuvering_efficiency(losses: LossFractions) -> float:
    return losses.maneuvering_efficiency


def system_efficiency(losses: LossFractions) -> float:
    return losses.system_efficiency
