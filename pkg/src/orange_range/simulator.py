"""Forward discharge simulation used as ground truth for the estimators.

The robot cruises at a fixed speed, alternating move and pause phases.
While moving it draws ``P_anc + max(F * v, 0) / omega_man``; while paused,
only ``P_anc``. There is no regenerative braking. Integration is explicit
fixed-step with forces evaluated at the start of each step; the final
step is shortened so that exactly the available energy is spent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernel
from .core import (
    AncillaryPowerModel,
    BatteryModel,
    InvalidParameterError,
    RobotParams,
    TelemetrySample,
)
from .generalized import ForceProfile
from .profiles import PiecewiseLinear


class SimulationError(RuntimeError):
    pass


class NonTerminatingError(SimulationError):
    """The scenario never draws energy while moving and has no ancillary load."""


@dataclass(frozen=True)
class Scenario:
    robot: RobotParams
    battery: BatteryModel
    ancillary: AncillaryPowerModel = AncillaryPowerModel()
    grade_profile: PiecewiseLinear | None = None        # x [m] -> theta [rad]
    friction_profile: PiecewiseLinear | None = None     # x [m] -> C_rr, overrides robot.c_rr
    disturbance_profile: PiecewiseLinear | None = None  # t [s] -> force [N]
    velocity_mps: float = 1.0
    duty_pattern: tuple[float, float] = (1.0, 0.0)      # (move_s, pause_s)
    dt_s: float = 0.01
    sample_period_s: float = 0.1
    seed: int = 0
    power_noise_rel: float = 0.0
    max_steps: int = 50_000_000

    def __post_init__(self):
        move, pause = self.duty_pattern
        if not (math.isfinite(move) and math.isfinite(pause) and move > 0 and pause >= 0):
            raise InvalidParameterError("duty pattern needs move_s > 0 and pause_s >= 0")
        if not (math.isfinite(self.velocity_mps) and self.velocity_mps > 0):
            raise InvalidParameterError("velocity must be positive")
        if not (math.isfinite(self.dt_s) and self.dt_s > 0):
            raise InvalidParameterError("dt must be positive")
        if not (math.isfinite(self.sample_period_s) and self.sample_period_s > 0):
            raise InvalidParameterError("sample period must be positive")
        if not 0.0 <= self.power_noise_rel <= 0.5:
            raise InvalidParameterError("power noise must lie in [0, 0.5]")
        if self.grade_profile is not None and any(abs(g) >= math.pi / 2 for g in self.grade_profile.values):
            raise InvalidParameterError("grade must satisfy |theta| < pi/2")
        if self.friction_profile is not None and self.friction_profile.min_value() < 0:
            raise InvalidParameterError("friction coefficients must be non-negative")

    @property
    def duty_cycle(self) -> float:
        move, pause = self.duty_pattern
        return move / (move + pause)

    def force_profile(self, subdivisions: int = 16) -> ForceProfile:
        """The scenario's resistive forces as a :class:`ForceProfile`.

        Rolling and grade resistance become the position component; where
        the grade varies each segment is subdivided because ``sin``/``cos``
        of a linear angle are not linear.
        """
        r = self.robot
        weight = r.weight_n
        grade = self.grade_profile
        friction = self.friction_profile
        f_position = None
        f_const = r.c_rr * weight
        if grade is not None or friction is not None:
            grids = [np.asarray(p.grid) for p in (grade, friction) if p is not None]
            x = np.unique(np.concatenate(grids))
            if grade is not None and len(grade.grid) > 1 and grade.max_value() != grade.min_value():
                pieces = [np.linspace(a, b, subdivisions + 1)[:-1] for a, b in zip(x[:-1], x[1:])]
                x = np.concatenate(pieces + [x[-1:]])
            theta = grade.evaluate(x) if grade is not None else np.zeros_like(x)
            crr = friction.evaluate(x) if friction is not None else np.full_like(x, r.c_rr)
            force = crr * weight * np.cos(theta) + weight * np.sin(theta)
            f_position = PiecewiseLinear(tuple(x), tuple(force))
            f_const = 0.0
        return ForceProfile(
            f_const_n=f_const,
            drag_coeff=r.drag_coeff,
            f_position=f_position,
            f_time=self.disturbance_profile,
        )

    def max_force_bound(self) -> float:
        """Upper bound of the total resistive force anywhere in the scenario."""
        r = self.robot
        weight = r.weight_n
        thetas = self.grade_profile.values if self.grade_profile is not None else (0.0,)
        lo, hi = min(thetas), max(thetas)
        max_cos = 1.0 if lo <= 0.0 <= hi else max(math.cos(lo), math.cos(hi))
        crr = self.friction_profile.max_value() if self.friction_profile is not None else r.c_rr
        dist = self.disturbance_profile.max_value() if self.disturbance_profile is not None else 0.0
        drag = r.drag_coeff * self.velocity_mps**2
        return crr * weight * max_cos + weight * math.sin(hi) + drag + dist


@dataclass(frozen=True)
class SimResult:
    true_range_m: float
    telemetry: tuple[TelemetrySample, ...] = field(repr=False)
    energy_breakdown: tuple[float, float]  # (ancillary J, traversal J)
    duration_s: float = 0.0
    steps: int = 0

    @property
    def total_energy_j(self) -> float:
        return self.energy_breakdown[0] + self.energy_breakdown[1]

    def telemetry_energy(self) -> float:
        """Energy implied by the telemetry stream, summed per interval."""
        total = 0.0
        prev = 0.0
        for s in self.telemetry:
            total += s.power_w * (s.t_s - prev)
            prev = s.t_s
        return total


def _profile_arrays(p: PiecewiseLinear | None, default: float):
    if p is None:
        return [0.0], [default]
    return list(p.grid), list(p.values)


def run(s: Scenario, integrate=None) -> SimResult:
    """Simulate one discharge and return the ground-truth range and telemetry.

    ``integrate`` overrides the kernel backend (see :mod:`orange_range.kernel`).
    Telemetry noise is applied when ``s.power_noise_rel > 0``.
    """
    integrate = integrate or kernel.integrate
    r = s.robot
    p_anc = s.ancillary.total_power
    e_hat = s.battery.effective_energy
    if e_hat > 0 and p_anc <= 0 and s.max_force_bound() <= 0:
        raise NonTerminatingError("no ancillary draw and no positive resistive force anywhere")

    gx, gv = _profile_arrays(s.grade_profile, 0.0)
    fx, fv = _profile_arrays(s.friction_profile, r.c_rr)
    dtt, dv = _profile_arrays(s.disturbance_profile, 0.0)
    move, pause = s.duty_pattern
    try:
        ts, xs, vs, ps, ms, ae, te, steps = integrate(
            r.mass_kg, r.gravity_mps2, r.drag_coeff, r.omega_man, p_anc, s.velocity_mps,
            move, pause, s.dt_s, s.sample_period_s, e_hat, s.max_steps,
            gx, gv, fx, fv, dtt, dv,
        )
    except RuntimeError as exc:
        raise SimulationError(str(exc)) from exc

    telemetry = tuple(
        TelemetrySample(t, x, v, p, bool(m)) for t, x, v, p, m in zip(ts, xs, vs, ps, ms)
    )
    result = SimResult(
        true_range_m=xs[-1],
        telemetry=telemetry,
        energy_breakdown=(ae, te),
        duration_s=ts[-1],
        steps=steps,
    )
    if s.power_noise_rel > 0:
        result = add_noise(result, s.power_noise_rel, s.seed)
    return result


def add_noise(result: SimResult, power_noise_rel: float, seed: int) -> SimResult:
    """Scale each telemetry power reading by ``1 + eps``, ``eps ~ U(-r, r)``."""
    if not 0.0 <= power_noise_rel <= 0.5:
        raise InvalidParameterError("power noise must lie in [0, 0.5]")
    if power_noise_rel == 0:
        return result
    rng = np.random.default_rng(seed)
    eps = rng.uniform(-power_noise_rel, power_noise_rel, size=len(result.telemetry))
    noisy = tuple(
        replace(sample, power_w=sample.power_w * (1.0 + float(e)))
        for sample, e in zip(result.telemetry, eps)
    )
    return replace(result, telemetry=noisy)
