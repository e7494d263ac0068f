from .grid import DEFAULT_HOLDER_RECTS, OccupancyGrid, build_grid, static_layer_for
from .profile import VelocityProfile, min_jerk_profile
from .rrt import (
    Path,
    ReplanOutcome,
    Unreachable,
    default_rewire_radius,
    plan_rrt_star,
    replan_if_blocked,
)
from .track import (
    DEFAULT_HEADING_GAINS,
    DEFAULT_TRAJECTORY_GAINS,
    Pid,
    PidGains,
    Tracker,
    arc_point,
    proximity_cap,
    track_step,
)

__all__ = [
    "DEFAULT_HEADING_GAINS",
    "DEFAULT_HOLDER_RECTS",
    "DEFAULT_TRAJECTORY_GAINS",
    "OccupancyGrid",
    "Path",
    "Pid",
    "PidGains",
    "ReplanOutcome",
    "Tracker",
    "Unreachable",
    "VelocityProfile",
    "arc_point",
    "build_grid",
    "default_rewire_radius",
    "min_jerk_profile",
    "plan_rrt_star",
    "proximity_cap",
    "replan_if_blocked",
    "static_layer_for",
    "track_step",
]
