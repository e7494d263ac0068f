from .mechanisms import (
    GRAB_REACH_MM,
    MECHANISM_ACTIONS,
    UnknownActionError,
    apply_mechanism,
)
from .model import (
    Basket,
    Cake,
    FieldConfig,
    HeldStack,
    Plate,
    RobotState,
    WorldState,
    total_cake_layers,
    total_cherries,
    wrap_angle,
)
from .scenario import (
    OpponentScript,
    ReplayLog,
    Scenario,
    default_scenario,
    default_scenario_dict,
    load_scenario,
    scenario_from_dict,
)
from .score import forecast_score
from .sensors import BeaconMeasurement, OdometrySensor, local_delta, sense_beacons
from .sim import step

__all__ = [
    "Basket",
    "BeaconMeasurement",
    "Cake",
    "FieldConfig",
    "GRAB_REACH_MM",
    "HeldStack",
    "MECHANISM_ACTIONS",
    "OdometrySensor",
    "OpponentScript",
    "Plate",
    "ReplayLog",
    "RobotState",
    "Scenario",
    "UnknownActionError",
    "WorldState",
    "apply_mechanism",
    "default_scenario",
    "default_scenario_dict",
    "forecast_score",
    "load_scenario",
    "local_delta",
    "scenario_from_dict",
    "sense_beacons",
    "step",
    "total_cake_layers",
    "total_cherries",
    "wrap_angle",
]
