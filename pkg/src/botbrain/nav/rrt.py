"""Sampling-based optimal planning (RRT*) with rewiring and replanning."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .grid import OccupancyGrid


class Unreachable(Exception):
    """No collision-free path: goal occupied or iterations exhausted.

    The caller is expected to stop the robot and surface a Failure to the
    behavior tree.
    """


@dataclass
class Path:
    waypoints: list[tuple[float, float]]

    @property
    def cost(self) -> float:
        return sum(
            math.hypot(b[0] - a[0], b[1] - a[1])
            for a, b in zip(self.waypoints, self.waypoints[1:])
        )

    @property
    def start(self):
        return self.waypoints[0]

    @property
    def goal(self):
        return self.waypoints[-1]


def default_rewire_radius(n: int, gamma_mm: float = 1500.0, cap_mm: float = 500.0) -> float:
    if n < 2:
        return cap_mm
    return min(gamma_mm * math.sqrt(math.log(n) / n), cap_mm)


def plan_rrt_star(
    grid: OccupancyGrid,
    start: tuple[float, float],
    goal: tuple[float, float],
    seed: int = 0,
    max_iters: int = 5000,
    step_mm: float = 100.0,
    goal_bias: float = 0.05,
    rewire_radius_fn=default_rewire_radius,
    goal_tol_mm: float = 20.0,
    stop_on_goal: bool = False,
) -> Path:
    """Best-cost path from start to within ``goal_tol_mm`` of goal.

    Deterministic per seed: the sample stream depends only on the RNG, so
    longer budgets extend shorter ones and never worsen the best cost.
    """
    if grid.point_occupied(*start):
        raise Unreachable("start position is occupied")
    if grid.point_occupied(*goal):
        raise Unreachable("goal position is occupied")

    rng = random.Random(seed)
    capacity = max_iters + 1
    xs = np.empty(capacity)
    ys = np.empty(capacity)
    cost = np.empty(capacity)
    parent = np.full(capacity, -1, dtype=np.int64)
    children: list[list[int]] = [[] for _ in range(capacity)]
    xs[0], ys[0] = start
    cost[0] = 0.0
    n = 1
    goal_nodes: list[int] = []

    def propagate_cost(idx: int) -> None:
        stack = [idx]
        while stack:
            node = stack.pop()
            for child in children[node]:
                d = math.hypot(xs[child] - xs[node], ys[child] - ys[node])
                cost[child] = cost[node] + d
                stack.append(child)

    for _ in range(max_iters):
        if rng.random() < goal_bias:
            sx, sy = goal
        else:
            sx = rng.uniform(0.0, grid.width_mm)
            sy = rng.uniform(0.0, grid.height_mm)

        d2 = (xs[:n] - sx) ** 2 + (ys[:n] - sy) ** 2
        nearest = int(np.argmin(d2))
        dist = math.sqrt(d2[nearest])
        if dist < 1e-9:
            continue
        frac = min(step_mm / dist, 1.0)
        nx = xs[nearest] + frac * (sx - xs[nearest])
        ny = ys[nearest] + frac * (sy - ys[nearest])
        if grid.point_occupied(nx, ny):
            continue

        radius = rewire_radius_fn(n)
        near = np.nonzero((xs[:n] - nx) ** 2 + (ys[:n] - ny) ** 2 <= radius**2)[0]

        # choose the cheapest collision-free parent among near ∪ {nearest}
        best_parent = -1
        best_cost = math.inf
        candidates = set(near.tolist())
        candidates.add(nearest)
        for idx in candidates:
            d = math.hypot(xs[idx] - nx, ys[idx] - ny)
            c = cost[idx] + d
            if c < best_cost and grid.segment_free((xs[idx], ys[idx]), (nx, ny)):
                best_parent, best_cost = idx, c
        if best_parent < 0:
            continue

        new = n
        xs[new], ys[new] = nx, ny
        cost[new] = best_cost
        parent[new] = best_parent
        children[best_parent].append(new)
        n += 1

        # rewire neighbours through the new node when that is cheaper
        for idx in near:
            idx = int(idx)
            if idx == best_parent:
                continue
            d = math.hypot(xs[idx] - nx, ys[idx] - ny)
            if cost[new] + d < cost[idx] and grid.segment_free((nx, ny), (xs[idx], ys[idx])):
                children[parent[idx]].remove(idx)
                parent[idx] = new
                children[new].append(idx)
                cost[idx] = cost[new] + d
                propagate_cost(idx)

        if math.hypot(nx - goal[0], ny - goal[1]) <= goal_tol_mm:
            goal_nodes.append(new)
            if stop_on_goal:
                break

    if not goal_nodes:
        raise Unreachable(f"no path after {max_iters} iterations")
    best = min(goal_nodes, key=lambda idx: cost[idx])
    waypoints = []
    idx = best
    while idx >= 0:
        waypoints.append((float(xs[idx]), float(ys[idx])))
        idx = int(parent[idx])
    waypoints.reverse()
    return Path(waypoints=waypoints)


@dataclass
class ReplanOutcome:
    kept: bool
    path: Path


def replan_if_blocked(
    remaining_path: Path, grid: OccupancyGrid, seed: int = 0, **plan_kwargs
) -> ReplanOutcome:
    """Keep the path when every remaining segment is still free; otherwise
    plan afresh from the current position (the path's first waypoint).
    Raises Unreachable when no new path exists."""
    points = remaining_path.waypoints
    clear = all(grid.segment_free(a, b) for a, b in zip(points, points[1:]))
    if clear:
        return ReplanOutcome(kept=True, path=remaining_path)
    new_path = plan_rrt_star(grid, points[0], points[-1], seed=seed, **plan_kwargs)
    return ReplanOutcome(kept=False, path=new_path)
