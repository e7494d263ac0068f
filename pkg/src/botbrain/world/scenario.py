"""Scenario files: initial field layout as JSON, plus replay snapshots."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .model import Basket, Cake, FieldConfig, HeldStack, Plate, RobotState, WorldState


@dataclass
class OpponentScript:
    robot_id: str
    waypoints: list[tuple[float, float]] = field(default_factory=list)
    speed_mm_s: float = 300.0


@dataclass
class Scenario:
    world: WorldState
    opponent_scripts: list[OpponentScript] = field(default_factory=list)


def default_scenario_dict() -> dict:
    """Two own robots, one scripted opponent, a spread of cakes and
    cherries, team plates and baskets."""
    return {
        "field": {},
        "own_team": "blue",
        "robots": [
            {"id": "r1", "team": "blue", "x_mm": 250, "y_mm": 250, "theta_rad": 0.0},
            {"id": "r2", "team": "blue", "x_mm": 250, "y_mm": 1750, "theta_rad": 0.0},
        ],
        "opponents": [
            {
                "id": "opp1",
                "team": "green",
                "x_mm": 2750,
                "y_mm": 1000,
                "theta_rad": 3.14159,
                "waypoints": [[2750, 400], [2750, 1600]],
                "speed_mm_s": 250,
            }
        ],
        "cakes": [
            {"x_mm": 1125, "y_mm": 550, "layers": ["pink", "pink", "pink"]},
            {"x_mm": 1125, "y_mm": 1450, "layers": ["yellow", "yellow", "yellow"]},
            {"x_mm": 725, "y_mm": 1000, "layers": ["brown", "brown", "brown"]},
            {"x_mm": 1875, "y_mm": 550, "layers": ["pink", "pink", "pink"]},
            {"x_mm": 1875, "y_mm": 1450, "layers": ["yellow", "yellow", "yellow"]},
            {"x_mm": 2275, "y_mm": 1000, "layers": ["brown", "brown", "brown"]},
        ],
        "cherries": [[1500, 30 + 50 * i] for i in range(4)]
        + [[1500, 1970 - 50 * i] for i in range(4)],
        "plates": [
            {"id": "plate_blue_1", "x_mm": 375, "y_mm": 375, "team": "blue"},
            {"id": "plate_blue_2", "x_mm": 375, "y_mm": 1625, "team": "blue"},
            {"id": "plate_green_1", "x_mm": 2625, "y_mm": 375, "team": "green"},
            {"id": "plate_green_2", "x_mm": 2625, "y_mm": 1625, "team": "green"},
        ],
        "baskets": [
            {"id": "blue_basket", "x_mm": 200, "y_mm": 1000, "team": "blue"},
            {"id": "green_basket", "x_mm": 2800, "y_mm": 1000, "team": "green"},
        ],
    }


def scenario_from_dict(data: dict, seed: int = 0) -> Scenario:
    config = FieldConfig(**data.get("field", {}))

    def robot_from(d: dict) -> RobotState:
        grippers = [
            None if g is None else HeldStack(layers=list(g["layers"]), cherry_on_top=g.get("cherry", False))
            for g in d.get("grippers", [None, None, None])
        ]
        return RobotState(
            id=d["id"],
            team=d["team"],
            x_mm=float(d["x_mm"]),
            y_mm=float(d["y_mm"]),
            theta_rad=float(d.get("theta_rad", 0.0)),
            grippers=grippers,
            cherries_held=int(d.get("cherries_held", 0)),
        )

    robots = [robot_from(d) for d in data.get("robots", [])]
    scripts = []
    for d in data.get("opponents", []):
        robots.append(robot_from(d))
        scripts.append(
            OpponentScript(
                robot_id=d["id"],
                waypoints=[tuple(w) for w in d.get("waypoints", [])],
                speed_mm_s=float(d.get("speed_mm_s", 300.0)),
            )
        )
    world = WorldState(
        config=config,
        robots=robots,
        cakes=[
            Cake(
                x_mm=float(c["x_mm"]),
                y_mm=float(c["y_mm"]),
                layers=list(c["layers"]),
                on_plate=c.get("on_plate"),
                cherry_on_top=c.get("cherry_on_top", False),
            )
            for c in data.get("cakes", [])
        ],
        cherries=[tuple(c) for c in data.get("cherries", [])],
        plates=[Plate(**p) for p in data.get("plates", [])],
        baskets=[Basket(**b) for b in data.get("baskets", [])],
        own_team=data.get("own_team", "blue"),
        rng_seed=seed,
    )
    return Scenario(world=world, opponent_scripts=scripts)


def load_scenario(path: str | Path, seed: int = 0) -> Scenario:
    return scenario_from_dict(json.loads(Path(path).read_text()), seed=seed)


def default_scenario(seed: int = 0) -> Scenario:
    return scenario_from_dict(default_scenario_dict(), seed=seed)


class ReplayLog:
    """JSONL world snapshots taken every N steps."""

    def __init__(self, path: str | Path, every_n_steps: int = 20):
        self.path = Path(path)
        self.every_n_steps = every_n_steps
        self._count = 0
        self.path.write_text("")

    def maybe_record(self, world: WorldState) -> None:
        if self._count % self.every_n_steps == 0:
            with self.path.open("a") as fh:
                fh.write(json.dumps(world.to_dict(), sort_keys=True) + "\n")
        self._count += 1
