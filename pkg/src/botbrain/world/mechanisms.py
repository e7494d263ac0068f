"""Instantaneous mechanism actions: grippers, sorter, cherry handling."""

from __future__ import annotations

import math

from ..bt import TickStatus
from .model import Cake, HeldStack, WorldState
from .score import forecast_score

GRAB_REACH_MM = 120.0
CHERRY_REACH_MM = 150.0
BASKET_REACH_MM = 300.0
RELEASE_OFFSET_MM = 80.0
CHERRIES_PER_COLLECT = 10


class UnknownActionError(KeyError):
    pass


def _dist(ax, ay, bx, by):
    return math.hypot(ax - bx, ay - by)


def _grab_cake(world, robot, params):
    slot = params["gripper"]
    if robot.grippers[slot] is not None:
        return TickStatus.FAILURE, f"gripper {slot} is already holding a stack"
    mx, my = robot.mount_point(world.config.robot_radius_mm)
    best = None
    for cake in world.cakes:
        d = _dist(mx, my, cake.x_mm, cake.y_mm)
        if d <= GRAB_REACH_MM and (best is None or d < best[0]):
            best = (d, cake)
    if best is None:
        return TickStatus.FAILURE, "no cake within reach"
    cake = best[1]
    robot.grippers[slot] = HeldStack(layers=list(cake.layers), cherry_on_top=cake.cherry_on_top)
    world.cakes.remove(cake)
    return TickStatus.SUCCESS, f"grabbed a {len(cake.layers)}-layer cake into gripper {slot}"


def _release_cake(world, robot, params):
    slot = params["gripper"]
    stack = robot.grippers[slot]
    if stack is None:
        return TickStatus.FAILURE, f"gripper {slot} is empty"
    mx, my = robot.mount_point(world.config.robot_radius_mm)
    x = mx + RELEASE_OFFSET_MM * math.cos(robot.theta_rad)
    y = my + RELEASE_OFFSET_MM * math.sin(robot.theta_rad)
    x = min(max(x, 0.0), float(world.config.width_mm))
    y = min(max(y, 0.0), float(world.config.height_mm))
    plate_id = None
    for plate in world.plates:
        if _dist(x, y, plate.x_mm, plate.y_mm) <= plate.radius_mm:
            plate_id = plate.id
            break
    world.cakes.append(
        Cake(x_mm=x, y_mm=y, layers=list(stack.layers), on_plate=plate_id,
             cherry_on_top=stack.cherry_on_top)
    )
    robot.grippers[slot] = None
    where = f"onto plate {plate_id}" if plate_id else "onto the field"
    return TickStatus.SUCCESS, f"released the stack {where}"


def _rotate_sorter(world, robot, params):
    steps = round(params["deg"] / 120) % 3
    robot.grippers = robot.grippers[-steps:] + robot.grippers[:-steps] if steps else robot.grippers
    return TickStatus.SUCCESS, f"sorter rotated by {params['deg']} degrees"


def _collect_cherries(world, robot, params):
    mx, my = robot.mount_point(world.config.robot_radius_mm)
    within = [c for c in world.cherries if _dist(mx, my, c[0], c[1]) <= CHERRY_REACH_MM]
    take = within[:CHERRIES_PER_COLLECT]
    if not take:
        return TickStatus.FAILURE, "no cherries within reach"
    for cherry in take:
        world.cherries.remove(cherry)
    robot.cherries_held += len(take)
    return TickStatus.SUCCESS, f"collected {len(take)} cherries"


def _deposit_cherries(world, robot, params):
    basket = next((b for b in world.baskets if b.id == params["basket"]), None)
    if basket is None:
        return TickStatus.FAILURE, f"no basket named {params['basket']!r}"
    if _dist(robot.x_mm, robot.y_mm, basket.x_mm, basket.y_mm) > BASKET_REACH_MM:
        return TickStatus.FAILURE, f"basket {basket.id} is out of reach"
    if robot.cherries_held == 0:
        return TickStatus.FAILURE, "no cherries on board"
    moved = robot.cherries_held
    basket.cherries += moved
    robot.cherries_held = 0
    return TickStatus.SUCCESS, f"deposited {moved} cherries into {basket.id}"


def _dispense_cherry(world, robot, params):
    if robot.cherries_held == 0:
        return TickStatus.FAILURE, "no cherries on board"
    mx, my = robot.mount_point(world.config.robot_radius_mm)
    for cake in world.cakes:
        if cake.on_plate is None or cake.cherry_on_top:
            continue
        if _dist(mx, my, cake.x_mm, cake.y_mm) <= CHERRY_REACH_MM:
            cake.cherry_on_top = True
            robot.cherries_held -= 1
            world.score_forecast = forecast_score(world)
            return TickStatus.SUCCESS, f"cherry placed on the cake on plate {cake.on_plate}"
    return TickStatus.FAILURE, "no plated cake without a cherry within reach"


def _forecast(world, robot, params):
    world.score_forecast = forecast_score(world)
    return TickStatus.SUCCESS, f"score forecast is {world.score_forecast}"


_MECHANISMS = {
    "GrabCake": _grab_cake,
    "ReleaseCake": _release_cake,
    "RotateSorter": _rotate_sorter,
    "CollectCherries": _collect_cherries,
    "DepositCherries": _deposit_cherries,
    "DispenseCherry": _dispense_cherry,
    "ForecastScore": _forecast,
}

MECHANISM_ACTIONS = frozenset(_MECHANISMS)


def apply_mechanism(world: WorldState, robot_id: str, action_id: str, params: dict):
    """Execute one instantaneous mechanism action; returns (status, detail)."""
    handler = _MECHANISMS.get(action_id)
    if handler is None:
        raise UnknownActionError(action_id)
    robot = world.robot(robot_id)
    status, detail = handler(world, robot, params)
    if status is TickStatus.SUCCESS and action_id in ("ReleaseCake", "GrabCake"):
        world.score_forecast = forecast_score(world)
    return status, detail
