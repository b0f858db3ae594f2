"""Operational range estimation for battery-powered mobile robots."""
from .core import (
    AncillaryPowerModel,
    BatteryModel,
    InvalidParameterError,
    LossFractions,
    RobotParams,
    TelemetrySample,
    Unbounded,
    ancillary_power,
    effective_energy,
    maneuvering_efficiency,
    system_efficiency,
)
from .generalized import (
    ForceProfile,
    OfflineApproximation,
    OnlineEstimator,
    OnlineEstimatorState,
    TelemetryError,
    estimate_range_offline,
    online_update,
    solve_range_implicit,
    traversal_energy,
)
from .profiles import PiecewiseLinear
from .simplified import (
    SimplifiedMission,
    max_range,
    maneuvering_energy,
    total_energy_for_distance,
    traction_force,
)
from .simulator import Scenario, SimResult, add_noise, run

__version__ = "0.1.0"
