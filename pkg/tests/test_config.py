import json

import pytest

from orange_range import config
from orange_range.config import ConfigError


def test_schemas_are_published():
    for name in config.SCHEMA_NAMES:
        schema = config.load_schema(name)
        assert schema["$id"] == f"{name}.schema.json"


def test_robot_round_trip():
    doc = {"mass_kg": 10, "c_rr": 0.1, "drag_coeff": 0.0, "losses": {"eta2_drive_motor": 0.1, "eta3_mechanical": 0.2}}
    r = config.robot_from_dict(doc)
    assert r.omega_man == pytest.approx(0.72)
    assert config.robot_from_dict(config.robot_to_dict(r)) == r


@pytest.mark.parametrize(
    "name, doc",
    [
        ("robot", {"mass_kg": 10, "c_rr": 0.1, "drag_coeff": 0, "colour": "red"}),
        ("robot", {"mass_kg": -1, "c_rr": 0.1, "drag_coeff": 0}),
        ("robot", {"mass_kg": 1, "c_rr": 0.1, "drag_coeff": 0, "losses": {"eta2_drive_motor": 1.0}}),
        ("battery", {"rated_energy_j": 100, "k1": -0.1}),
        ("ancillary", {"s0_w": "two"}),
        ("mission", {"v_opt_mps": 1, "duty_cycle": 0}),
        ("profile", {"position": [[0, 1, 2]]}),
        ("scenario", {"robot": {"mass_kg": 1, "c_rr": 0, "drag_coeff": 0}}),
    ],
)
def test_schema_violations(name, doc):
    with pytest.raises(ConfigError):
        getattr(config, f"{name}_from_dict")(doc)


def test_profile_with_non_increasing_grid():
    with pytest.raises(ConfigError):
        config.profile_from_dict({"position": [[0, 1], [0, 2]]})


def test_mission_velocity_defaults_to_cruise():
    m = config.mission_from_dict({"v_opt_mps": 1.5})
    assert m.velocity_mps == 1.5 and m.duty_cycle == 1.0


def test_scenario_from_dict(tmp_path):
    doc = {
        "robot": {"mass_kg": 10, "c_rr": 0.1, "drag_coeff": 0},
        "battery": {"rated_energy_j": 981},
        "friction_profile": [[0, 0.1], [100, 0.2]],
        "duty_pattern": {"move_s": 4, "pause_s": 1},
        "dt_s": 0.02,
        "seed": 4,
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    s = config.load_scenario(path)
    assert s.duty_cycle == pytest.approx(0.8)
    assert s.friction_profile(50) == pytest.approx(0.15)
    assert s.dt_s == 0.02 and s.seed == 4


def test_invalid_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        config.load_robot(path)
