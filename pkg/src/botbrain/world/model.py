"""Field, game objects and robot state for the deterministic simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

CAKE_RADIUS_MM = 60.0
ROBOT_RADIUS_MM = 180.0


@dataclass(frozen=True)
class FieldConfig:
    width_mm: int = 3000
    height_mm: int = 2000
    cell_mm: int = 10
    beacons: tuple[tuple[float, float], ...] = (
        (-100.0, 1000.0),
        (3100.0, -100.0),
        (3100.0, 2100.0),
    )
    match_duration_s: float = 100.0
    robot_radius_mm: float = ROBOT_RADIUS_MM
    vmax_mm_s: float = 1000.0
    omega_max_rad_s: float = 4.0

    def __post_init__(self):
        if self.width_mm % self.cell_mm or self.height_mm % self.cell_mm:
            raise ValueError("cell size must divide both field dimensions")
        if len(self.beacons) != 3:
            raise ValueError("exactly three beacons expected")
        for bx, by in self.beacons:
            if 0 <= bx <= self.width_mm and 0 <= by <= self.height_mm:
                raise ValueError(f"beacon ({bx}, {by}) lies inside the playable area")
        (x1, y1), (x2, y2), (x3, y3) = self.beacons
        area2 = (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)
        if abs(area2) < 1e-6:
            raise ValueError("beacons must not be collinear")


@dataclass
class HeldStack:
    layers: list[str]
    cherry_on_top: bool = False


@dataclass
class Cake:
    x_mm: float
    y_mm: float
    layers: list[str]
    on_plate: str | None = None
    cherry_on_top: bool = False

    def __post_init__(self):
        if not 1 <= len(self.layers) <= 3:
            raise ValueError("a cake on the field has 1 to 3 layers")


@dataclass
class Plate:
    id: str
    x_mm: float
    y_mm: float
    team: str
    radius_mm: float = 225.0


@dataclass
class Basket:
    id: str
    x_mm: float
    y_mm: float
    team: str
    cherries: int = 0


@dataclass
class RobotState:
    id: str
    team: str
    x_mm: float
    y_mm: float
    theta_rad: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    omega: float = 0.0
    grippers: list[HeldStack | None] = field(default_factory=lambda: [None, None, None])
    cherries_held: int = 0

    @property
    def pose(self) -> tuple[float, float, float]:
        return (self.x_mm, self.y_mm, self.theta_rad)

    def mount_point(self, radius_mm: float = ROBOT_RADIUS_MM) -> tuple[float, float]:
        """Front-mounted mechanism reference point."""
        return (
            self.x_mm + radius_mm * math.cos(self.theta_rad),
            self.y_mm + radius_mm * math.sin(self.theta_rad),
        )


@dataclass
class WorldState:
    config: FieldConfig
    robots: list[RobotState]
    cakes: list[Cake]
    cherries: list[tuple[float, float]]
    plates: list[Plate] = field(default_factory=list)
    baskets: list[Basket] = field(default_factory=list)
    own_team: str = "blue"
    t_ms: int = 0
    rng_seed: int = 0
    score_forecast: int = 0

    def robot(self, robot_id: str) -> RobotState:
        for robot in self.robots:
            if robot.id == robot_id:
                return robot
        raise KeyError(robot_id)

    def own_robots(self) -> list[RobotState]:
        return [r for r in self.robots if r.team == self.own_team]

    def opponents(self) -> list[RobotState]:
        return [r for r in self.robots if r.team != self.own_team]

    def to_dict(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "own_team": self.own_team,
            "score_forecast": self.score_forecast,
            "robots": [
                {
                    "id": r.id,
                    "team": r.team,
                    "x_mm": r.x_mm,
                    "y_mm": r.y_mm,
                    "theta_rad": r.theta_rad,
                    "vx": r.vx,
                    "vy": r.vy,
                    "omega": r.omega,
                    "grippers": [
                        None if g is None else {"layers": list(g.layers), "cherry": g.cherry_on_top}
                        for g in r.grippers
                    ],
                    "cherries_held": r.cherries_held,
                }
                for r in self.robots
            ],
            "cakes": [
                {
                    "x_mm": c.x_mm,
                    "y_mm": c.y_mm,
                    "layers": list(c.layers),
                    "on_plate": c.on_plate,
                    "cherry_on_top": c.cherry_on_top,
                }
                for c in self.cakes
            ],
            "cherries": [list(c) for c in self.cherries],
            "plates": [
                {"id": p.id, "x_mm": p.x_mm, "y_mm": p.y_mm, "team": p.team, "radius_mm": p.radius_mm}
                for p in self.plates
            ],
            "baskets": [
                {"id": b.id, "x_mm": b.x_mm, "y_mm": b.y_mm, "team": b.team, "cherries": b.cherries}
                for b in self.baskets
            ],
        }


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2 * math.pi)
    if wrapped <= 0:
        wrapped += 2 * math.pi
    return wrapped - math.pi


def total_cake_layers(world: WorldState) -> int:
    on_field = sum(len(c.layers) for c in world.cakes)
    held = sum(
        len(g.layers) for r in world.robots for g in r.grippers if g is not None
    )
    return on_field + held


def total_cherries(world: WorldState) -> int:
    free = len(world.cherries)
    held = sum(r.cherries_held for r in world.robots)
    on_cakes = sum(1 for c in world.cakes if c.cherry_on_top)
    in_stacks = sum(
        1 for r in world.robots for g in r.grippers if g is not None and g.cherry_on_top
    )
    banked = sum(b.cherries for b in world.baskets)
    return free + held + on_cakes + in_stacks + banked
