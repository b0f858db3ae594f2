"""JSON configuration documents, validated against the bundled schemas.

Schemas live in ``orange_range/schemas/*.schema.json``; unknown keys are
rejected everywhere.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from .core import AncillaryPowerModel, BatteryModel, InvalidParameterError, LossFractions, RobotParams
from .generalized import ForceProfile, OfflineApproximation
from .profiles import PiecewiseLinear
from .simplified import SimplifiedMission
from .simulator import Scenario

SCHEMA_NAMES = ("robot", "battery", "ancillary", "mission", "profile", "scenario")


class ConfigError(ValueError):
    """A configuration document failed validation."""


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files(__package__).joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _registry() -> Registry:
    return Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(load_schema(name))) for name in SCHEMA_NAMES
    )


def validate(doc, name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(name), registry=_registry())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"{name} config invalid at {where}: {e.message}")


def read_json(path):
    """Parse a JSON file; I/O errors propagate as ``OSError``."""
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc


def _build(factory, **kwargs):
    try:
        return factory(**kwargs)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc


def robot_from_dict(doc: dict) -> RobotParams:
    validate(doc, "robot")
    doc = dict(doc)
    losses = _build(LossFractions, **doc.pop("losses", {}))
    return _build(RobotParams, losses=losses, **doc)


def battery_from_dict(doc: dict) -> BatteryModel:
    validate(doc, "battery")
    return _build(BatteryModel, **doc)


def ancillary_from_dict(doc: dict) -> AncillaryPowerModel:
    validate(doc, "ancillary")
    return _build(AncillaryPowerModel, **doc)


def mission_from_dict(doc: dict) -> SimplifiedMission:
    validate(doc, "mission")
    doc = dict(doc)
    doc.setdefault("velocity_mps", doc["v_opt_mps"])
    return _build(SimplifiedMission, **doc)


def _profile(pairs):
    if pairs is None:
        return None
    try:
        return PiecewiseLinear.from_pairs(pairs)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc


def profile_from_dict(doc: dict) -> tuple[ForceProfile, OfflineApproximation]:
    validate(doc, "profile")
    profile = _build(
        ForceProfile,
        f_const_n=doc.get("f_const_n", 0.0),
        drag_coeff=doc.get("drag_coeff", 0.0),
        f_position=_profile(doc.get("position")),
        f_time=_profile(doc.get("time")),
    )
    approx = OfflineApproximation(doc.get("offline_mean_specific_force_n", 0.0))
    return profile, approx


def scenario_from_dict(doc: dict) -> Scenario:
    validate(doc, "scenario")
    duty = doc.get("duty_pattern", {"move_s": 1.0})
    kwargs = {k: doc[k] for k in ("velocity_mps", "dt_s", "sample_period_s", "seed", "power_noise_rel") if k in doc}
    return _build(
        Scenario,
        robot=robot_from_dict(doc["robot"]),
        battery=battery_from_dict(doc["battery"]),
        ancillary=ancillary_from_dict(doc.get("ancillary", {})),
        grade_profile=_profile(doc.get("grade_profile")),
        friction_profile=_profile(doc.get("friction_profile")),
        disturbance_profile=_profile(doc.get("disturbance_profile")),
        duty_pattern=(float(duty["move_s"]), float(duty.get("pause_s", 0.0))),
        **kwargs,
    )


def robot_to_dict(r: RobotParams) -> dict:
    losses = r.losses
    return {
        "mass_kg": r.mass_kg,
        "c_rr": r.c_rr,
        "drag_coeff": r.drag_coeff,
        "gravity_mps2": r.gravity_mps2,
        "losses": {
            "eta1_battery": losses.eta1_battery,
            "eta2_drive_motor": losses.eta2_drive_motor,
            "eta3_mechanical": losses.eta3_mechanical,
            "eta4_ancillary": losses.eta4_ancillary,
        },
    }


def load_robot(path) -> RobotParams:
    return robot_from_dict(read_json(path))


def load_battery(path) -> BatteryModel:
    return battery_from_dict(read_json(path))


def load_ancillary(path) -> AncillaryPowerModel:
    return ancillary_from_dict(read_json(path))


def load_mission(path) -> SimplifiedMission:
    return mission_from_dict(read_json(path))


def load_profile(path) -> tuple[ForceProfile, OfflineApproximation]:
    return profile_from_dict(read_json(path))


def load_scenario(path) -> Scenario:
    return scenario_from_dict(read_json(path))
