"""Range estimation with position-, time- and velocity-dependent forces.

The resistive force on the robot is split into four parts: a constant
``f_const_n``, a velocity law ``drag_coeff * v**2``, a sampled function of
position and a sampled function of time. Time is mapped onto position with
``t = x / (v * D)``, which makes the whole integrand a function of position
and piecewise linear between the merged knots of the two sampled grids.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .core import (
    AncillaryPowerModel,
    BatteryModel,
    InvalidParameterError,
    RobotParams,
    TelemetrySample,
    Unbounded,
)
from .profiles import PiecewiseLinear, cumulative_trapezoid, trapezoid
from .simplified import SimplifiedMission, static_force


class TelemetryError(ValueError):
    """A telemetry sample that cannot be applied to the estimator."""


@dataclass(frozen=True)
class ForceProfile:
    f_const_n: float = 0.0
    drag_coeff: float = 0.0
    f_position: PiecewiseLinear | None = None
    f_time: PiecewiseLinear | None = None

    def __post_init__(self):
        if not math.isfinite(self.f_const_n):
            raise InvalidParameterError("f_const_n must be finite")
        if not (math.isfinite(self.drag_coeff) and self.drag_coeff >= 0):
            raise InvalidParameterError("drag_coeff must be finite and non-negative")

    @classmethod
    def from_simplified(cls, r: RobotParams, m: SimplifiedMission) -> "ForceProfile":
        """Constant-grade mission expressed as a force profile."""
        return cls(f_const_n=static_force(r, m.grade_theta_rad), drag_coeff=r.drag_coeff)

    def velocity_force(self, v: float) -> float:
        return self.drag_coeff * v * v

    def domain_limit(self, v: float, duty: float) -> float:
        """Distance up to which every sampled component is defined."""
        limit = math.inf
        if self.f_position is not None and len(self.f_position.grid) > 1:
            limit = min(limit, self.f_position.end)
        if self.f_time is not None and len(self.f_time.grid) > 1:
            limit = min(limit, self.f_time.end * v * duty)
        return limit

    def path_knots(self, d: float, v: float, duty: float) -> np.ndarray:
        """Merged knot positions in ``[0, d]`` where the integrand may kink."""
        knots = [np.array([0.0, d])]
        if self.f_position is not None:
            knots.append(np.asarray(self.f_position.grid))
        if self.f_time is not None:
            knots.append(np.asarray(self.f_time.grid) * (v * duty))
        x = np.unique(np.concatenate(knots))
        return x[(x >= 0.0) & (x <= d)]

    def varying_force(self, x: np.ndarray, v: float, duty: float) -> np.ndarray:
        """Position plus time-dependent force evaluated along the path."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        if self.f_position is not None:
            out += self.f_position.evaluate(x)
        if self.f_time is not None:
            out += self.f_time.evaluate(x / (v * duty))
        return out


def _check_speed(v: float, duty: float) -> None:
    if not (math.isfinite(v) and math.isfinite(duty)) or v * duty <= 0:
        raise InvalidParameterError("velocity * duty cycle must be positive")


def path_integral(p: ForceProfile, d: float, v: float, duty: float) -> float:
    """Integral of the position- and time-dependent forces over ``[0, d]``.

    The integrand is linear between merged knots, so the trapezoid rule on
    those knots is exact.
    """
    _check_speed(v, duty)
    if not d >= 0:
        raise InvalidParameterError("path length must be non-negative")
    if d == 0 or (p.f_position is None and p.f_time is None):
        return 0.0
    x = p.path_knots(d, v, duty)
    return trapezoid(x, p.varying_force(x, v, duty))


def traversal_energy(p: ForceProfile, path_length: float, v: float, duty: float, omega_man: float) -> float:
    """Electrical energy the drivetrain draws to cover ``path_length``."""
    _check_speed(v, duty)
    if not 0.0 < omega_man <= 1.0:
        raise InvalidParameterError("maneuvering efficiency must lie in (0, 1]")
    if not path_length >= 0:
        raise InvalidParameterError("path length must be non-negative")
    steady = (p.f_const_n + p.velocity_force(v)) * path_length
    return (steady + path_integral(p, path_length, v, duty)) / omega_man


@dataclass(frozen=True)
class OfflineApproximation:
    """Supervisor's one-shot average of the varying forces, in newtons."""

    mean_specific_force_n: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.mean_specific_force_n):
            raise InvalidParameterError("mean_specific_force_n must be finite")

    @classmethod
    def from_profile(cls, p: ForceProfile, planned_distance_m: float, v: float, duty: float) -> "OfflineApproximation":
        if not planned_distance_m > 0:
            raise InvalidParameterError("planned distance must be positive")
        return cls(path_integral(p, planned_distance_m, v, duty) / planned_distance_m)


def estimate_range_offline(
    r: RobotParams,
    b: BatteryModel,
    a: AncillaryPowerModel,
    p: ForceProfile,
    approx: OfflineApproximation,
    v: float,
    duty: float,
) -> float | Unbounded:
    _check_speed(v, duty)
    omega = r.omega_man
    per_metre = (
        a.total_power / (v * duty)
        + (p.f_const_n + p.velocity_force(v)) / omega
        + approx.mean_specific_force_n / omega
    )
    if not per_metre > 0:
        return Unbounded("energy per metre is not positive")
    return b.effective_energy / per_metre


class CumulativeEnergy:
    """Battery energy drawn after covering ``d`` metres, for ``d`` in ``[0, limit]``.

    Precomputes the path integral at every knot so each evaluation is a
    lookup plus one partial trapezoid.
    """

    def __init__(self, r: RobotParams, a: AncillaryPowerModel, p: ForceProfile, v: float, duty: float, limit: float):
        _check_speed(v, duty)
        self.limit = limit
        self.omega = r.omega_man
        self.linear_rate = a.total_power / (v * duty) + (p.f_const_n + p.velocity_force(v)) / self.omega
        if math.isfinite(limit):
            self.knots = p.path_knots(limit, v, duty)
            self.force = p.varying_force(self.knots, v, duty)
            self.integral = cumulative_trapezoid(self.knots, self.force)
        else:
            self.knots = np.array([0.0])
            self.force = np.array([0.0])
            self.integral = np.array([0.0])

    def _integral_at(self, d: float) -> float:
        knots = self.knots
        if knots.size < 2:
            return 0.0
        i = min(int(np.searchsorted(knots, d, side="right")) - 1, knots.size - 2)
        i = max(i, 0)
        x0, x1 = knots[i], knots[i + 1]
        f0, f1 = self.force[i], self.force[i + 1]
        fd = f0 + (f1 - f0) * (d - x0) / (x1 - x0)
        return float(self.integral[i] + 0.5 * (f0 + fd) * (d - x0))

    def __call__(self, d: float) -> float:
        return self.linear_rate * d + self._integral_at(d) / self.omega

    def at_knots(self) -> np.ndarray:
        return self.linear_rate * self.knots + self.integral / self.omega


def bisect(func, lo: float, hi: float, target: float, xtol: float = 1e-13, maxiter: int = 200) -> float:
    """Find ``x`` in ``[lo, hi]`` with ``func(x) == target``.

    Requires ``func(lo) < target <= func(hi)``; returns the upper end of the
    final bracket so the result never undershoots the target.
    """
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if func(mid) >= target:
            hi = mid
        else:
            lo = mid
        if hi - lo <= xtol * max(abs(hi), 1.0):
            break
    return hi


def solve_range_implicit(
    r: RobotParams,
    b: BatteryModel,
    a: AncillaryPowerModel,
    p: ForceProfile,
    v: float,
    duty: float,
) -> float | Unbounded:
    """Solve for the distance at which cumulative energy first reaches the battery energy.

    The distance appears both as the integration limit and in the balance, so
    the root is bracketed at the first profile knot where cumulative energy
    reaches the target and then refined by bisection.
    """
    _check_speed(v, duty)
    target = b.effective_energy
    if target <= 0:
        return 0.0
    limit = p.domain_limit(v, duty)
    energy = CumulativeEnergy(r, a, p, v, duty, limit)

    if not math.isfinite(limit):
        if not energy.linear_rate > 0:
            return Unbounded("energy per metre is not positive")
        hi = target / energy.linear_rate
        while energy(hi) < target:
            hi *= 2.0
        return bisect(energy, 0.0, hi, target)

    at_knots = energy.at_knots()
    reached = np.nonzero(at_knots >= target)[0]
    if reached.size == 0:
        return Unbounded("force profile ends before the battery is exhausted", domain_limit_m=float(limit))
    j = int(reached[0])
    return bisect(energy, float(energy.knots[j - 1]), float(energy.knots[j]), target)


@dataclass(frozen=True)
class OnlineEstimatorState:
    """Read-only snapshot of an :class:`OnlineEstimator`.

    ``current_estimate_m`` is ``None`` while no motion has been recorded.
    """

    distance_so_far_m: float = 0.0
    energy_used_j: float = 0.0
    window_distance_m: float = 0.0
    window_energy_j: float = 0.0
    current_estimate_m: float | None = None
    last_t_s: float = 0.0
    samples: int = 0

    @property
    def specific_consumption(self) -> float | None:
        if self.window_distance_m > 0 and self.window_energy_j > 0:
            return self.window_energy_j / self.window_distance_m
        return None


@dataclass
class OnlineEstimator:
    """Running range estimate from measured energy per metre.

    The trailing window covers ``window_m`` metres when given, otherwise
    ``window_fraction`` of the distance so far but at least
    ``min_window_m``. Remaining range is extrapolated as the energy left
    divided by the window's specific consumption.

    Not thread-safe; one owner feeds samples and may hand out
    :attr:`state` snapshots.
    """

    battery: BatteryModel
    window_m: float | None = None
    window_fraction: float = 0.2
    min_window_m: float = 5.0
    _xs: list = field(default_factory=lambda: [0.0], repr=False)
    _es: list = field(default_factory=lambda: [0.0], repr=False)
    _state: OnlineEstimatorState = field(default_factory=OnlineEstimatorState, repr=False)

    def __post_init__(self):
        if self.window_m is not None and not self.window_m > 0:
            raise InvalidParameterError("window_m must be positive")
        if not (0 < self.window_fraction <= 1 and self.min_window_m >= 0):
            raise InvalidParameterError("invalid window settings")
        self.available_energy = self.battery.effective_energy

    @property
    def state(self) -> OnlineEstimatorState:
        return self._state

    def window_length(self, x: float) -> float:
        if self.window_m is not None:
            return self.window_m
        return max(self.min_window_m, self.window_fraction * x)

    def update(self, sample: TelemetrySample) -> OnlineEstimatorState:
        """Apply one sample; on rejection raise :class:`TelemetryError` and keep the state."""
        s = self._state
        t, x, power = sample.t_s, sample.x_m, sample.power_w
        if not (math.isfinite(t) and math.isfinite(x) and math.isfinite(power) and math.isfinite(sample.v_mps)):
            raise TelemetryError("sample contains NaN or infinite values")
        if t < s.last_t_s:
            raise TelemetryError(f"timestamp {t} precedes {s.last_t_s}")
        if x < s.distance_so_far_m:
            raise TelemetryError(f"distance {x} precedes {s.distance_so_far_m}")
        if power < 0:
            raise TelemetryError("negative power")

        energy = s.energy_used_j + power * (t - s.last_t_s)
        self._xs.append(x)
        self._es.append(energy)

        j = bisect_right(self._xs, x - self.window_length(x)) - 1
        j = max(j, 0)
        wx = x - self._xs[j]
        we = energy - self._es[j]
        estimate = None
        if wx > 0 and we > 0:
            remaining = max(self.available_energy - energy, 0.0)
            estimate = x + remaining / (we / wx)
        self._state = OnlineEstimatorState(
            distance_so_far_m=x,
            energy_used_j=energy,
            window_distance_m=wx,
            window_energy_j=we,
            current_estimate_m=estimate,
            last_t_s=t,
            samples=s.samples + 1,
        )
        return self._state


def online_update(estimator: OnlineEstimator, sample: TelemetrySample) -> OnlineEstimatorState:
    return estimator.update(sample)
