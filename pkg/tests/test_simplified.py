import math

import pytest
from hypothesis import given, strategies as st

from orange_range.core import AncillaryPowerModel, BatteryModel, InvalidParameterError, LossFractions, RobotParams, Unbounded
from orange_range.simplified import (
    SimplifiedMission,
    energy_breakdown,
    max_range,
    maneuvering_energy,
    total_energy_for_distance,
    traction_force,
)

from conftest import battery


def test_traction_flat_rolling_only(robot, flat):
    assert traction_force(robot, flat) == pytest.approx(9.81, rel=1e-15)


def test_traction_vertical_limit_is_weight(robot):
    near_vertical = SimplifiedMission(grade_theta_rad=math.pi / 2 - 1e-9)
    assert traction_force(robot, near_vertical) == pytest.approx(robot.weight_n, rel=1e-8)


def test_traction_with_drag():
    r = RobotParams(10.0, 0.1, 0.5)
    m = SimplifiedMission(velocity_mps=2.0, v_opt_mps=2.0)
    assert traction_force(r, m) == pytest.approx(11.81, rel=1e-15)


def test_maneuvering_energy_examples(robot, flat):
    assert maneuvering_energy(robot, flat, 5.0) == pytest.approx(49.05, rel=1e-15)
    assert maneuvering_energy(robot, flat, 0.0) == 0.0
    frictionless = RobotParams(10.0, 0.0, 0.0)
    assert maneuvering_energy(frictionless, flat, 100.0) == 0.0
    with pytest.raises(InvalidParameterError):
        maneuvering_energy(robot, flat, -1.0)


def test_total_energy_examples(robot, flat, no_ancillary):
    b = battery(1.0)
    four_w = AncillaryPowerModel(s0_w=4.0)
    assert total_energy_for_distance(robot, b, no_ancillary, flat, 100.0) == pytest.approx(981.0, rel=1e-15)
    assert total_energy_for_distance(robot, b, four_w, flat, 100.0) == pytest.approx(1381.0, rel=1e-15)
    half = SimplifiedMission(duty_cycle=0.5)
    assert total_energy_for_distance(robot, b, four_w, half, 100.0) == pytest.approx(1781.0, rel=1e-15)


def test_energy_breakdown_resums(lossy_robot):
    a = AncillaryPowerModel(s0_w=3.0, s1_w_per_hz=0.1, f_s_hz=10)
    m = SimplifiedMission(grade_theta_rad=0.05, velocity_mps=1.3, v_opt_mps=1.3, duty_cycle=0.7)
    ae, te = energy_breakdown(lossy_robot, a, m, 250.0)
    assert ae + te == total_energy_for_distance(lossy_robot, battery(1.0), a, m, 250.0)
    assert ae == pytest.approx(4.0 * 250.0 / (1.3 * 0.7))


def test_max_range_examples(robot, flat, no_ancillary):
    assert max_range(robot, battery(981.0), no_ancillary, flat) == pytest.approx(100.0, rel=1e-15)
    assert max_range(robot, battery(1381.0), AncillaryPowerModel(s0_w=4.0), flat) == pytest.approx(100.0, rel=1e-15)
    graded = SimplifiedMission(grade_theta_rad=0.1)
    assert max_range(robot, battery(981.0), no_ancillary, graded) < max_range(robot, battery(981.0), no_ancillary, flat)


def test_max_range_unbounded_when_no_resistance(no_ancillary, flat):
    frictionless = RobotParams(10.0, 0.0, 0.0)
    result = max_range(frictionless, battery(100.0), no_ancillary, flat)
    assert isinstance(result, Unbounded)


def test_max_range_unbounded_on_steep_downhill(robot, no_ancillary):
    downhill = SimplifiedMission(grade_theta_rad=-0.5)
    assert isinstance(max_range(robot, battery(100.0), no_ancillary, downhill), Unbounded)


def test_mild_downhill_with_ancillary_is_finite(robot):
    downhill = SimplifiedMission(grade_theta_rad=-0.12)
    result = max_range(robot, battery(1000.0), AncillaryPowerModel(s0_w=5.0), downhill)
    assert isinstance(result, float) and result > 0


@pytest.mark.parametrize(
    "kwargs",
    [dict(duty_cycle=0.0), dict(duty_cycle=1.5), dict(velocity_mps=0.0), dict(v_opt_mps=-1.0), dict(grade_theta_rad=math.pi / 2)],
)
def test_mission_invariants(kwargs):
    with pytest.raises(InvalidParameterError):
        SimplifiedMission(**kwargs)


configs = st.builds(
    lambda m, crr, c, theta, v, duty, s0, e2, e3, energy: (
        RobotParams(m, crr, c, LossFractions(eta2_drive_motor=e2, eta3_mechanical=e3)),
        BatteryModel(energy),
        AncillaryPowerModel(s0_w=s0),
        SimplifiedMission(grade_theta_rad=theta, velocity_mps=v, v_opt_mps=v, duty_cycle=duty),
    ),
    st.floats(0.5, 200), st.floats(0.001, 0.5), st.floats(0, 2), st.floats(0, 0.5),
    st.floats(0.1, 5), st.floats(0.05, 1), st.one_of(st.just(0.0), st.floats(0.01, 50)), st.floats(0, 0.6), st.floats(0, 0.6),
    st.floats(10, 1e7),
)


@given(configs)
def test_round_trip(cfg):
    r, b, a, m = cfg
    d = max_range(r, b, a, m)
    assert total_energy_for_distance(r, b, a, m, d) == pytest.approx(b.effective_energy, rel=1e-9)


@given(configs, st.floats(0.05, 0.99))
def test_full_duty_gives_longest_range(cfg, duty):
    r, b, a, m = cfg
    full = max_range(r, b, a, SimplifiedMission(m.grade_theta_rad, m.velocity_mps, m.v_opt_mps, 1.0))
    partial = max_range(r, b, a, SimplifiedMission(m.grade_theta_rad, m.velocity_mps, m.v_opt_mps, duty))
    if a.total_power == 0:
        assert full == partial
    else:
        assert full > partial


def test_grade_monotonicity_fails_past_critical_angle():
    # traction C_rr*W*cos + W*sin peaks at tan(theta) = 1/C_rr; beyond that it falls
    r = RobotParams(10.0, 1.0, 0.0)
    b, a = battery(1000.0), AncillaryPowerModel()
    low = max_range(r, b, a, SimplifiedMission(grade_theta_rad=0.9))
    high = max_range(r, b, a, SimplifiedMission(grade_theta_rad=1.2))
    assert high > low
