import pytest

from orange_range import kernel
from orange_range.core import AncillaryPowerModel, BatteryModel, LossFractions, RobotParams
from orange_range.simplified import SimplifiedMission

BACKENDS = [pytest.param(kernel.python_integrate, id="python")]
if kernel.compiled_integrate is not None:
    BACKENDS.append(pytest.param(kernel.compiled_integrate, id="compiled"))


@pytest.fixture(params=BACKENDS)
def integrate(request):
    return request.param


@pytest.fixture
def robot():
    """10 kg robot, C_rr 0.1, no drag, lossless drivetrain."""
    return RobotParams(mass_kg=10.0, c_rr=0.1, drag_coeff=0.0)


@pytest.fixture
def lossy_robot():
    return RobotParams(
        mass_kg=10.0,
        c_rr=0.1,
        drag_coeff=0.5,
        losses=LossFractions(eta2_drive_motor=0.1, eta3_mechanical=0.2),
    )


@pytest.fixture
def no_ancillary():
    return AncillaryPowerModel()


@pytest.fixture
def flat():
    return SimplifiedMission(grade_theta_rad=0.0, velocity_mps=1.0, v_opt_mps=1.0, duty_cycle=1.0)


def battery(energy_j):
    return BatteryModel(rated_energy_j=energy_j)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
