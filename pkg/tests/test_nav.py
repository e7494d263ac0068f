import math
import random

import numpy as np
import pytest

from botbrain.nav import (
    OccupancyGrid,
    Path,
    Tracker,
    Unreachable,
    build_grid,
    min_jerk_profile,
    plan_rrt_star,
    proximity_cap,
    replan_if_blocked,
    static_layer_for,
    track_step,
)
from botbrain.world import default_scenario


def empty_grid(w=3000, h=2000, cell=10):
    return OccupancyGrid(w, h, cell, np.zeros((h // cell, w // cell), dtype=np.uint8))


def bordered_grid():
    return OccupancyGrid(3000, 2000, 10, static_layer_for(3000, 2000, 10))


class TestGrid:
    def test_empty_field_equals_static_layer(self):
        world = default_scenario().world
        world.robots = []
        world.cakes = []
        grid = build_grid(world, inflation_mm=180.0)
        assert np.array_equal(grid.composite, grid.static_layer)

    def test_robot_disk_matches_per_cell_distance_oracle(self):
        world = default_scenario().world
        robot = world.robot("r1")
        robot.x_mm, robot.y_mm = 1500.0, 1000.0
        world.robots = [robot]
        world.cakes = []
        grid = build_grid(world, inflation_mm=180.0, holder_rects=None)
        radius = 180.0 + 180.0
        for iy in range(grid.rows):
            for ix in range(grid.cols):
                cx, cy = (ix + 0.5) * 10, (iy + 0.5) * 10
                inside = (cx - 1500.0) ** 2 + (cy - 1000.0) ** 2 <= radius**2
                assert bool(grid.dynamic_layer[iy, ix]) == inside

    def test_inflation_monotone(self):
        world = default_scenario().world
        small = build_grid(world, inflation_mm=180.0)
        large = build_grid(world, inflation_mm=300.0)
        assert np.all(large.composite >= small.composite)

    def test_inflation_below_robot_radius_rejected(self):
        with pytest.raises(ValueError):
            build_grid(default_scenario().world, inflation_mm=50.0)

    def test_pgm_dump_shape(self):
        grid = bordered_grid()
        pgm = grid.to_pgm()
        assert pgm.startswith(b"P5\n300 200\n255\n")
        assert len(pgm) == len(b"P5\n300 200\n255\n") + 300 * 200


def random_obstacle_grid(seed):
    rng = random.Random(seed)
    grid = bordered_grid()
    for _ in range(5):
        grid.add_circle(rng.uniform(600, 2400), rng.uniform(400, 1600), rng.uniform(150, 320))
    return grid


class TestRrtStar:
    def test_clear_corridor_near_optimal(self):
        start, goal = (200.0, 1000.0), (2800.0, 1000.0)
        straight = math.hypot(goal[0] - start[0], goal[1] - start[1])
        for seed in range(20):
            path = plan_rrt_star(bordered_grid(), start, goal, seed=seed, max_iters=3000)
            assert path.cost <= 1.05 * straight

    def test_goal_occupied_is_unreachable(self):
        grid = bordered_grid()
        grid.add_circle(2000.0, 1000.0, 300.0)
        with pytest.raises(Unreachable):
            plan_rrt_star(grid, (200.0, 1000.0), (2000.0, 1000.0), seed=1)

    def test_more_iterations_never_cost_more(self):
        start, goal = (300.0, 300.0), (2700.0, 1700.0)
        for seed in range(5):
            grid = random_obstacle_grid(seed + 50)
            try:
                short = plan_rrt_star(grid, start, goal, seed=seed, max_iters=1000)
            except Unreachable:
                continue
            long = plan_rrt_star(grid, start, goal, seed=seed, max_iters=5000)
            assert long.cost <= short.cost + 1e-9

    def test_deterministic_per_seed(self):
        grid = random_obstacle_grid(3)
        a = plan_rrt_star(grid, (300.0, 300.0), (2700.0, 1700.0), seed=9, max_iters=1500)
        b = plan_rrt_star(grid, (300.0, 300.0), (2700.0, 1700.0), seed=9, max_iters=1500)
        assert a.waypoints == b.waypoints

    def test_paths_avoid_occupied_cells(self):
        # independent rasterizing oracle over every returned segment
        for seed in range(10):
            grid = random_obstacle_grid(seed)
            try:
                path = plan_rrt_star(
                    grid, (300.0, 300.0), (2700.0, 1700.0), seed=seed, max_iters=3000,
                    stop_on_goal=True,
                )
            except Unreachable:
                continue
            for a, b in zip(path.waypoints, path.waypoints[1:]):
                length = math.hypot(b[0] - a[0], b[1] - a[1])
                for i in range(int(length) + 1):
                    f = i / max(length, 1)
                    x = a[0] + f * (b[0] - a[0])
                    y = a[1] + f * (b[1] - a[1])
                    iy, ix = grid.cell_of(x, y)
                    assert not grid.composite[iy, ix]

    def test_path_endpoints(self):
        path = plan_rrt_star(bordered_grid(), (300.0, 300.0), (2700.0, 1700.0), seed=2,
                             max_iters=2000, stop_on_goal=True)
        assert path.start == (300.0, 300.0)
        assert math.hypot(path.goal[0] - 2700.0, path.goal[1] - 1700.0) <= 20.0


class TestReplan:
    def test_unchanged_grid_keeps_path(self):
        grid = bordered_grid()
        path = plan_rrt_star(grid, (300.0, 1000.0), (2700.0, 1000.0), seed=4, stop_on_goal=True)
        outcome = replan_if_blocked(path, grid, seed=4)
        assert outcome.kept and outcome.path is path

    def test_new_obstacle_triggers_replanning(self):
        grid = bordered_grid()
        path = plan_rrt_star(grid, (300.0, 1000.0), (2700.0, 1000.0), seed=5, stop_on_goal=True)
        blocked = bordered_grid()
        blocked.add_circle(1500.0, 1000.0, 350.0)
        outcome = replan_if_blocked(path, blocked, seed=5, max_iters=4000)
        assert not outcome.kept
        for a, b in zip(outcome.path.waypoints, outcome.path.waypoints[1:]):
            assert blocked.segment_free(a, b)

    def test_goal_enclosed_is_unreachable(self):
        grid = bordered_grid()
        path = plan_rrt_star(grid, (300.0, 1000.0), (2700.0, 1000.0), seed=6, stop_on_goal=True)
        walled = bordered_grid()
        walled.add_circle(2700.0, 1000.0, 400.0)
        with pytest.raises(Unreachable):
            replan_if_blocked(path, walled, seed=6, max_iters=1500)


class TestMinJerk:
    def test_boundary_conditions(self):
        profile = min_jerk_profile(1000.0, 500.0, 800.0)
        T = profile.duration_s
        assert profile.fraction(0.0) == 0.0
        assert profile.fraction(T) == 1.0
        assert profile.speed_mm_s(0.0) == pytest.approx(0.0, abs=1e-9)
        assert profile.speed_mm_s(T) == pytest.approx(0.0, abs=1e-9)
        # boundary acceleration via finite differences
        eps = 1e-6
        assert profile.speed_mm_s(eps) / eps < 1e-2
        assert profile.speed_mm_s(T - eps) / eps < 1e-2

    def test_peak_speed_at_midpoint(self):
        profile = min_jerk_profile(2000.0, 10000.0, 50000.0)  # accel-limited
        T = profile.duration_s
        ts = np.linspace(0, T, 20001)
        speeds = np.array([profile.speed_mm_s(t) for t in ts])
        peak_at = ts[int(np.argmax(speeds))]
        assert peak_at == pytest.approx(T / 2, rel=1e-3)
        assert speeds.max() == pytest.approx(15.0 * 2000.0 / (8.0 * T), rel=1e-6)

    @pytest.mark.parametrize("length,vmax,amax", [(500.0, 400.0, 600.0), (2600.0, 900.0, 1200.0), (80.0, 1000.0, 2000.0)])
    def test_limits_hold_by_finite_differences(self, length, vmax, amax):
        profile = min_jerk_profile(length, vmax, amax)
        T = profile.duration_s
        ts = np.linspace(0.0, T, 4001)
        speeds = np.array([profile.speed_mm_s(t) for t in ts])
        assert np.all(np.abs(speeds) <= vmax * (1 + 1e-9))
        accel = np.diff(speeds) / np.diff(ts)
        assert np.all(np.abs(accel) <= amax * 1.001)

    def test_positive_inputs_required(self):
        with pytest.raises(ValueError):
            min_jerk_profile(0.0, 100.0, 100.0)


class TestTracking:
    def test_on_path_aligned_is_pure_feedforward(self):
        path = Path(waypoints=[(0.0, 0.0), (1000.0, 0.0)])
        profile = min_jerk_profile(1000.0, 400.0, 800.0)
        t = profile.duration_s / 2
        pos = profile.position_mm(t)
        vx, vy, omega = track_step((pos, 0.0, 0.0), path, profile, t)
        assert vx == pytest.approx(profile.speed_mm_s(t))
        assert vy == pytest.approx(0.0, abs=1e-9)
        assert omega == pytest.approx(0.0, abs=1e-9)

    def test_lateral_offset_correction_points_to_path(self):
        from botbrain.nav import PidGains

        path = Path(waypoints=[(0.0, 0.0), (1000.0, 0.0)])
        profile = min_jerk_profile(1000.0, 400.0, 800.0)
        t = profile.duration_s / 2
        pos = profile.position_mm(t)
        gains = PidGains(kp=2.0)  # P-only
        vx, vy, _ = track_step((pos, 50.0, 0.0), path, profile, t, trajectory_gains=gains)
        assert vy < 0  # offset +y, correction toward the path

    def _simulate(self, path, vmax=600.0, amax=900.0, disturb=None):
        profile = min_jerk_profile(path.cost, vmax, amax)
        tracker = Tracker(path, profile, vmax_mm_s=vmax)
        dt = 0.025
        pose = (path.start[0], path.start[1], 0.0)
        t = 0.0
        max_err = 0.0
        while t < profile.duration_s + 1.0:
            vx, vy, omega = tracker.step(pose, t, speed_cap=vmax, dt_s=dt)
            if disturb:
                vx, vy = disturb(t, vx, vy)
            pose = (pose[0] + vx * dt, pose[1] + vy * dt, pose[2] + omega * dt)
            # cross-track: distance to the nearest path segment
            err = min(
                self._point_segment_dist(pose[:2], a, b)
                for a, b in zip(path.waypoints, path.waypoints[1:])
            )
            max_err = max(max_err, err)
            t += dt
            goal_dist = math.hypot(pose[0] - path.goal[0], pose[1] - path.goal[1])
            if t > profile.duration_s and goal_dist <= 20.0:
                return max_err, goal_dist
        return max_err, math.hypot(pose[0] - path.goal[0], pose[1] - path.goal[1])

    @staticmethod
    def _point_segment_dist(p, a, b):
        ax, ay = a
        bx, by = b
        length2 = (bx - ax) ** 2 + (by - ay) ** 2
        if length2 == 0:
            return math.hypot(p[0] - ax, p[1] - ay)
        u = max(0.0, min(1.0, ((p[0] - ax) * (bx - ax) + (p[1] - ay) * (by - ay)) / length2))
        return math.hypot(p[0] - (ax + u * (bx - ax)), p[1] - (ay + u * (by - ay)))

    def test_l_shaped_path_low_cross_track(self):
        rng = random.Random(77)
        for _ in range(10):
            x0, y0 = rng.uniform(300, 900), rng.uniform(300, 900)
            path = Path(waypoints=[(x0, y0), (x0 + rng.uniform(600, 1200), y0),
                                   (x0 + rng.uniform(600, 1200), y0 + rng.uniform(500, 900))])
            max_err, goal_dist = self._simulate(path)
            assert max_err < 30.0
            assert goal_dist <= 20.0

    def test_random_start_goal_arrival(self):
        rng = random.Random(99)
        arrivals = 0
        for _ in range(100):
            start = (rng.uniform(300, 2700), rng.uniform(300, 1700))
            goal = (rng.uniform(300, 2700), rng.uniform(300, 1700))
            if math.hypot(goal[0] - start[0], goal[1] - start[1]) < 100:
                arrivals += 1
                continue
            path = Path(waypoints=[start, goal])
            _, goal_dist = self._simulate(path)
            if goal_dist <= 20.0:
                arrivals += 1
        assert arrivals >= 95


class TestProximityCap:
    def test_far_gives_vmax(self):
        assert proximity_cap((0, 0, 0), [(1000.0, 0.0)], vmax_mm_s=700.0) == 700.0

    def test_at_stop_distance_gives_zero(self):
        assert proximity_cap((0, 0, 0), [(250.0, 0.0)], vmax_mm_s=700.0) == 0.0

    def test_linear_midpoint(self):
        assert proximity_cap((0, 0, 0), [(425.0, 0.0)], vmax_mm_s=700.0) == pytest.approx(350.0)

    def test_no_others_gives_vmax(self):
        assert proximity_cap((0, 0, 0), [], vmax_mm_s=700.0) == 700.0

    def test_bad_thresholds_rejected(self):
        with pytest.raises(ValueError):
            proximity_cap((0, 0, 0), [], d_full_mm=200.0, d_stop_mm=250.0)
