"""Fit model parameters from bench and field logs."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class CalibrationError(ValueError):
    pass


class UnderdeterminedError(CalibrationError):
    """The data cannot pin down every requested parameter."""


class InconsistentDataError(CalibrationError):
    pass


@dataclass(frozen=True)
class PowerSample:
    f_s_hz: float
    power_w: float

    def __post_init__(self):
        if not (self.f_s_hz >= 0 and self.power_w >= 0):
            raise CalibrationError("power samples need f_s_hz >= 0 and power_w >= 0")


@dataclass(frozen=True)
class WheelsUpRun:
    commanded_v_mps: float
    mean_power_w: float

    def __post_init__(self):
        if not self.mean_power_w >= 0:
            raise CalibrationError("wheels-up power must be non-negative")


@dataclass(frozen=True)
class LoadedRun:
    commanded_v_mps: float
    mean_power_w: float
    mean_traction_n: float

    def __post_init__(self):
        if not self.mean_power_w > 0:
            raise CalibrationError("loaded power must be positive")


class AncillaryFit(NamedTuple):
    s0_w: float
    s1_w_per_hz: float
    residual: float  # RMS, W


class DecayFit(NamedTuple):
    k1: float
    k2: float
    residual: float  # RMS of ln(E_O / E)


class EfficiencyFit(NamedTuple):
    omega_man: float
    residual: float  # std of the per-velocity estimates
    per_velocity: dict


def _rms(r: np.ndarray) -> float:
    return float(math.sqrt(np.mean(r * r))) if r.size else 0.0


def fit_ancillary(samples: Sequence[PowerSample]) -> AncillaryFit:
    """Ordinary least-squares line ``power = s0 + s1 * f_s``."""
    f = np.array([s.f_s_hz for s in samples], dtype=float)
    p = np.array([s.power_w for s in samples], dtype=float)
    if f.size < 2 or np.unique(f).size < 2:
        raise UnderdeterminedError("need at least two distinct sensor frequencies")
    design = np.column_stack([np.ones_like(f), f])
    (s0, s1), *_ = np.linalg.lstsq(design, p, rcond=None)
    return AncillaryFit(float(s0), float(s1), _rms(p - design @ np.array([s0, s1])))


def fit_battery_decay(observations: Sequence[tuple[float, float, float]], rated_energy_j: float) -> DecayFit:
    """Fit ``ln(E_O / E) = k1 * cycles + k2 * age_days`` through the origin.

    ``observations`` are ``(cycles, age_days, measured_energy_j)`` triples.
    """
    if not rated_energy_j > 0:
        raise CalibrationError("rated energy must be positive")
    obs = np.array(observations, dtype=float).reshape(-1, 3)
    cycles, age, energy = obs[:, 0], obs[:, 1], obs[:, 2]
    if np.any(energy <= 0) or np.any(energy > rated_energy_j):
        raise CalibrationError("measured energies must lie in (0, rated_energy_j]")
    if np.any(cycles < 0) or np.any(age < 0):
        raise CalibrationError("cycles and age must be non-negative")
    if np.unique(cycles).size < 2:
        raise UnderdeterminedError("k1 underdetermined: need at least two distinct cycle counts")
    if np.unique(age).size < 2:
        raise UnderdeterminedError("k2 underdetermined: need at least two distinct ages")
    design = np.column_stack([cycles, age])
    if obs.shape[0] < 2 or np.linalg.matrix_rank(design) < 2:
        raise UnderdeterminedError("cycle count and age are collinear; k1 and k2 cannot be separated")
    y = np.log(rated_energy_j / energy)
    (k1, k2), *_ = np.linalg.lstsq(design, y, rcond=None)
    return DecayFit(float(k1), float(k2), _rms(y - design @ np.array([k1, k2])))


def fit_maneuvering_efficiency(
    wheels_up: Sequence[WheelsUpRun],
    loaded: Sequence[LoadedRun],
    ancillary_w: float,
) -> EfficiencyFit:
    """Lumped drivetrain efficiency from paired wheels-up and loaded runs.

    At each commanded velocity the efficiency is the mechanical output
    ``traction * v`` over the non-ancillary electrical input
    ``loaded_power - ancillary_w``; the estimates are averaged. Wheels-up
    runs (no load) check consistency: loaded power must exceed them.
    """
    if not ancillary_w >= 0:
        raise CalibrationError("ancillary power must be non-negative")
    idle = {}
    for run in wheels_up:
        idle.setdefault(run.commanded_v_mps, []).append(run.mean_power_w)
    per_velocity = {}
    for run in loaded:
        if run.commanded_v_mps not in idle:
            raise CalibrationError(f"no wheels-up run at {run.commanded_v_mps} m/s")
        idle_w = float(np.mean(idle[run.commanded_v_mps]))
        if run.mean_power_w <= idle_w:
            raise InconsistentDataError(
                f"loaded power {run.mean_power_w} W does not exceed wheels-up power {idle_w} W at {run.commanded_v_mps} m/s"
            )
        electrical = run.mean_power_w - ancillary_w
        omega = run.mean_traction_n * run.commanded_v_mps / electrical
        if not 0 < omega <= 1 + 1e-12:
            raise InconsistentDataError(f"implied efficiency {omega:.4g} outside (0, 1] at {run.commanded_v_mps} m/s")
        per_velocity.setdefault(run.commanded_v_mps, []).append(min(omega, 1.0))
    if not per_velocity:
        raise UnderdeterminedError("need at least one loaded run")
    estimates = {v: float(np.mean(o)) for v, o in per_velocity.items()}
    values = np.array(list(estimates.values()))
    return EfficiencyFit(float(values.mean()), float(values.std()), estimates)


def _read_csv(path, columns: Sequence[str]) -> list[list[float]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(columns) <= set(reader.fieldnames):
            raise CalibrationError(f"{path}: expected columns {','.join(columns)}")
        try:
            return [[float(row[c]) for c in columns] for row in reader]
        except ValueError as exc:
            raise CalibrationError(f"{path}: {exc}") from exc


def read_power_samples(path) -> list[PowerSample]:
    return [PowerSample(*r) for r in _read_csv(path, ("f_s_hz", "power_w"))]


def read_decay_observations(path) -> list[tuple[float, float, float]]:
    return [tuple(r) for r in _read_csv(path, ("cycles", "age_days", "measured_energy_j"))]


def read_wheels_up(path) -> list[WheelsUpRun]:
    return [WheelsUpRun(*r) for r in _read_csv(path, ("commanded_v_mps", "mean_power_w"))]


def read_loaded(path) -> list[LoadedRun]:
    return [LoadedRun(*r) for r in _read_csv(path, ("commanded_v_mps", "mean_power_w", "mean_traction_n"))]
