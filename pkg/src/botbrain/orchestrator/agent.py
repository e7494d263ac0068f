"""Per-robot runtime: localization, navigation state machine, and the
blackboard handlers a dispatched behavior tree binds to."""

from __future__ import annotations

import math
import zlib
from enum import Enum

from ..bt import BehaviorTree, Executor, TickStatus, TickTrace
from ..localize import NoiseParams, ParticleFilter
from ..nav import (
    Tracker,
    Unreachable,
    build_grid,
    min_jerk_profile,
    plan_rrt_star,
    proximity_cap,
    replan_if_blocked,
)
from ..nav.rrt import Path
from ..world import OdometrySensor, apply_mechanism, sense_beacons
from ..world.model import wrap_angle


class MotionState(Enum):
    IDLE = "idle"
    TRACK = "track"
    TURN = "turn"
    DONE = "done"
    FAILED = "failed"


def _stable_hash(text: str) -> int:
    return zlib.crc32(text.encode())


class AgentRuntime:
    """One robot's brain-side state inside a session."""

    def __init__(self, session, robot_id: str):
        self.session = session
        self.robot_id = robot_id
        cfg = session.config
        world = session.world
        robot = world.robot(robot_id)
        self.base_pose = (robot.x_mm, robot.y_mm)
        seed_base = session.seed * 1009 + _stable_hash(robot_id)

        self.filter = ParticleFilter(
            beacons=list(world.config.beacons),
            n_particles=cfg.filter.n_particles,
            sigma_r_mm=cfg.filter.sigma_r_mm,
            sigma_b_rad=cfg.filter.sigma_b_rad,
            gate_mm=cfg.filter.gate_mm,
            weighting=dict(cfg.filter.weighting),
            noise=NoiseParams(cfg.filter.process_sigma_xy_mm, cfg.filter.process_sigma_theta_rad),
            seed=seed_base,
        )
        self.filter.initialize(
            robot.pose, cfg.filter.init_spread_mm, cfg.filter.init_spread_rad
        )
        self.odometry = {
            "wheel": OdometrySensor(world, robot_id, cfg.filter.wheel_slip_sigma, seed_base + 1),
            "lidarScan": OdometrySensor(world, robot_id, cfg.filter.lidar_slip_sigma, seed_base + 2),
        }
        self.estimate = self.filter.estimate()

        self.tree: BehaviorTree | None = None
        self.executor: Executor | None = None
        self.trace = TickTrace()
        self.tree_status: TickStatus | None = None

        self.motion = MotionState.IDLE
        self.goal: tuple | None = None  # snapped goal
        self.face_target: tuple | None = None
        self.path: Path | None = None
        self.tracker: Tracker | None = None
        self.path_t = 0.0
        self.command = (0.0, 0.0, 0.0)
        self.plan_counter = 0
        self.wait_started: dict[str, int] = {}
        self.current_task = ""
        self.last_leaf = ""

    # -- dispatch ------------------------------------------------------

    def dispatch(self, tree: BehaviorTree) -> None:
        self.tree = tree
        self.trace = TickTrace()
        self.executor = Executor(
            tree, self._handlers(), clock=lambda: self.session.world.t_ms, trace=self.trace
        )
        self.tree_status = None
        self._reset_motion()

    def tick_tree(self) -> TickStatus | None:
        if self.executor is None or self.tree_status in (TickStatus.SUCCESS, TickStatus.FAILURE):
            return None
        self.tree_status = self.executor.tick()
        return self.tree_status

    # -- per-step localization and motion -------------------------------

    def localize_step(self, step_index: int) -> None:
        world = self.session.world
        cfg = self.session.config.filter
        deltas = {name: sensor.sense(world) for name, sensor in self.odometry.items()}
        self.filter.predict(deltas)
        if step_index % cfg.beacon_every_steps == 0:
            seed = self.session.seed * 7919 + step_index * 13 + _stable_hash(self.robot_id) % 1013
            measurements = sense_beacons(
                world, self.robot_id, cfg.sigma_r_mm, cfg.sigma_b_rad, seed=seed
            )
            self.filter.update(measurements)
        self.estimate = self.filter.estimate()

    def motion_step(self, step_index: int) -> tuple[float, float, float]:
        cfg = self.session.config.nav
        dt_s = self.session.config.dt_ms / 1000.0
        est = self.estimate.pose
        if self.motion is MotionState.TRACK:
            if step_index % cfg.replan_every_steps == 0:
                self._check_replan(est)
            if self.motion is MotionState.TRACK:  # replanning may have failed
                self.path_t += dt_s
                cap = proximity_cap(
                    est,
                    [
                        (r.x_mm, r.y_mm)
                        for r in self.session.world.robots
                        if r.id != self.robot_id
                    ],
                    cfg.d_full_mm,
                    cfg.d_stop_mm,
                    cfg.vmax_mm_s,
                )
                self.command = self.tracker.step(est, self.path_t, cap, dt_s)
                self._maybe_arrived(est)
        elif self.motion is MotionState.TURN:
            err = wrap_angle(self._face_heading(est) - est[2])
            if abs(err) < 0.05:
                self.motion = MotionState.DONE
                self.command = (0.0, 0.0, 0.0)
            else:
                self.command = (0.0, 0.0, max(-2.0, min(2.0, 3.0 * err)))
        else:
            self.command = (0.0, 0.0, 0.0)
        return self.command

    # -- navigation internals -------------------------------------------

    def _reset_motion(self):
        self.motion = MotionState.IDLE
        self.goal = None
        self.face_target = None
        self.path = None
        self.tracker = None
        self.path_t = 0.0
        self.command = (0.0, 0.0, 0.0)
        self.wait_started.clear()

    def _grid(self, clear_around: tuple | None = None):
        grid = build_grid(
            self.session.world,
            self.session.config.nav.inflation_mm,
            exclude_robot_id=self.robot_id,
        )
        if clear_around is not None:
            grid.clear_dynamic_circle(clear_around[0], clear_around[1], 60.0)
        return grid

    def _plan_seed(self) -> int:
        self.plan_counter += 1
        return self.session.seed * 523 + self.plan_counter * 17 + _stable_hash(self.robot_id) % 97

    def _begin_move(self, x: float, y: float) -> bool:
        cfg = self.session.config.nav
        est = self.estimate.pose
        grid = self._grid(clear_around=(est[0], est[1]))
        snapped = grid.nearest_free(x, y)
        if snapped is None:
            self.motion = MotionState.FAILED
            return False
        try:
            path = plan_rrt_star(
                grid,
                (est[0], est[1]),
                snapped,
                seed=self._plan_seed(),
                max_iters=cfg.max_iters,
                step_mm=cfg.step_mm,
                goal_bias=cfg.goal_bias,
                goal_tol_mm=cfg.goal_tol_mm,
                stop_on_goal=True,
            )
        except Unreachable:
            self.motion = MotionState.FAILED
            return False
        self.goal = snapped
        far = math.hypot(x - snapped[0], y - snapped[1]) > 50.0
        self.face_target = (x, y) if far else None
        self._install_path(path)
        return True

    def _install_path(self, path: Path) -> None:
        cfg = self.session.config.nav
        length = max(path.cost, 1.0)
        profile = min_jerk_profile(length, cfg.vmax_mm_s, cfg.amax_mm_s2)
        self.path = path
        self.tracker = Tracker(
            path, profile,
            vmax_mm_s=cfg.vmax_mm_s,
            omega_max_rad_s=self.session.world.config.omega_max_rad_s,
        )
        self.path_t = 0.0
        self.motion = MotionState.TRACK

    def _remaining_path(self, est) -> Path:
        done_mm = self.tracker.profile.position_mm(self.path_t)
        points = self.path.waypoints
        acc = 0.0
        remaining = [(est[0], est[1])]
        for a, b in zip(points, points[1:]):
            seg = math.hypot(b[0] - a[0], b[1] - a[1])
            if acc + seg >= done_mm:
                remaining.append(b)
            acc += seg
        if len(remaining) == 1:
            remaining.append(points[-1])
        return Path(waypoints=remaining)

    def _check_replan(self, est) -> None:
        cfg = self.session.config.nav
        grid = self._grid(clear_around=(est[0], est[1]))
        try:
            outcome = replan_if_blocked(
                self._remaining_path(est),
                grid,
                seed=self._plan_seed(),
                max_iters=cfg.max_iters,
                step_mm=cfg.step_mm,
                goal_bias=cfg.goal_bias,
                goal_tol_mm=cfg.goal_tol_mm,
                stop_on_goal=True,
            )
        except Unreachable:
            self.motion = MotionState.FAILED
            self.command = (0.0, 0.0, 0.0)
            return
        if not outcome.kept:
            self._install_path(outcome.path)

    def _maybe_arrived(self, est) -> None:
        cfg = self.session.config.nav
        if self.path_t < self.tracker.profile.duration_s:
            return
        dist = math.hypot(est[0] - self.goal[0], est[1] - self.goal[1])
        if dist <= cfg.goal_tol_mm:
            self.command = (0.0, 0.0, 0.0)
            self.motion = MotionState.TURN if self.face_target else MotionState.DONE
        elif self.path_t > self.tracker.profile.duration_s + 3.0:
            self.motion = MotionState.FAILED
            self.command = (0.0, 0.0, 0.0)

    def _face_heading(self, est) -> float:
        return math.atan2(self.face_target[1] - est[1], self.face_target[0] - est[0])

    # -- blackboard handlers ---------------------------------------------

    def _move_status(self, x: float, y: float) -> TickStatus:
        if self.motion in (MotionState.IDLE, MotionState.FAILED) or self.goal is None:
            started = self._begin_move(x, y)
            return TickStatus.RUNNING if started else TickStatus.FAILURE
        if self.motion is MotionState.DONE:
            self._reset_motion()
            return TickStatus.SUCCESS
        return TickStatus.RUNNING

    def _handle_move(self, params) -> TickStatus:
        self.current_task = f"MoveTo({params['x_mm']}, {params['y_mm']})"
        return self._move_status(float(params["x_mm"]), float(params["y_mm"]))

    def _handle_return_to_base(self, params) -> TickStatus:
        self.current_task = "ReturnToBase"
        return self._move_status(*self.base_pose)

    def _handle_wait(self, params) -> TickStatus:
        key = f"wait{params['ms']}"
        now = self.session.world.t_ms
        started = self.wait_started.setdefault(key, now)
        if now - started >= params["ms"]:
            del self.wait_started[key]
            return TickStatus.SUCCESS
        return TickStatus.RUNNING

    def _remap_gripper(self, slot: int, want_free: bool) -> int:
        grippers = self.session.world.robot(self.robot_id).grippers
        ok = (lambda g: g is None) if want_free else (lambda g: g is not None)
        if ok(grippers[slot]):
            return slot
        for i, g in enumerate(grippers):
            if ok(g):
                return i
        return slot

    def _mechanism(self, action_id: str, params: dict) -> TickStatus:
        params = dict(params)
        if action_id == "GrabCake":
            params["gripper"] = self._remap_gripper(params["gripper"], want_free=True)
        elif action_id == "ReleaseCake":
            params["gripper"] = self._remap_gripper(params["gripper"], want_free=False)
        status, detail = apply_mechanism(self.session.world, self.robot_id, action_id, params)
        self.last_leaf = f"{action_id}: {detail}"
        return status

    def _handlers(self) -> dict:
        world = self.session.world

        def mech(action_id):
            return lambda params: self._mechanism(action_id, params)

        def path_clear(params) -> bool:
            est = self.estimate.pose
            grid = self._grid(clear_around=(est[0], est[1]))
            snapped = grid.nearest_free(float(params["x_mm"]), float(params["y_mm"]))
            if snapped is None:
                return False
            return grid.segment_free((est[0], est[1]), snapped)

        def is_holding(params) -> bool:
            return world.robot(self.robot_id).grippers[params["gripper"]] is not None

        def time_remaining(params) -> bool:
            left = world.config.match_duration_s * 1000.0 - world.t_ms
            return left >= params["ms"]

        def opponent_near(params) -> bool:
            robot = world.robot(self.robot_id)
            return any(
                math.hypot(o.x_mm - robot.x_mm, o.y_mm - robot.y_mm) <= params["dist_mm"]
                for o in world.opponents()
            )

        return {
            "MoveTo": self._handle_move,
            "ReturnToBase": self._handle_return_to_base,
            "Wait": self._handle_wait,
            "GrabCake": mech("GrabCake"),
            "ReleaseCake": mech("ReleaseCake"),
            "RotateSorter": mech("RotateSorter"),
            "CollectCherries": mech("CollectCherries"),
            "DepositCherries": mech("DepositCherries"),
            "DispenseCherry": mech("DispenseCherry"),
            "ForecastScore": mech("ForecastScore"),
            "PathClear": path_clear,
            "IsHolding": is_holding,
            "TimeRemaining": time_remaining,
            "OpponentNear": opponent_near,
        }
