"""Kinematic stepping with wall and robot-robot collision resolution.

Controls are world-frame commanded velocities (vx, vy, omega) for a
holonomic platform. Colliding robots stop at contact; the step is a pure
function of (state, controls) and bit-reproducible.
"""

from __future__ import annotations

import math

from .model import WorldState, wrap_angle

_CONTACT_BACKOFF = 1e-9


def _clamp_velocity(vx: float, vy: float, omega: float, vmax: float, omega_max: float):
    speed = math.hypot(vx, vy)
    if speed > vmax:
        scale = vmax / speed
        vx, vy = vx * scale, vy * scale
    omega = max(-omega_max, min(omega_max, omega))
    return vx, vy, omega


def _pair_contact_time(px, py, dx, dy, min_dist):
    """Earliest t in [0,1] at which |p + t*d| == min_dist, else None."""
    a = dx * dx + dy * dy
    b = 2 * (px * dx + py * dy)
    c = px * px + py * py - min_dist * min_dist
    if c < 0:
        return 0.0  # already touching
    if a == 0:
        return None
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    root = (-b - math.sqrt(disc)) / (2 * a)
    if 0 <= root <= 1:
        return root
    return None


def step(world: WorldState, controls: dict, dt_ms: int = 25) -> WorldState:
    """Advance the world by one control period (default 40 Hz)."""
    if dt_ms <= 0:
        raise ValueError("dt_ms must be positive")
    cfg = world.config
    dt = dt_ms / 1000.0
    r = cfg.robot_radius_mm

    robots = world.robots
    starts = [(rb.x_mm, rb.y_mm) for rb in robots]
    disps = []
    for robot in robots:
        vx, vy, omega = controls.get(robot.id, (0.0, 0.0, 0.0))
        vx, vy, omega = _clamp_velocity(vx, vy, omega, cfg.vmax_mm_s, cfg.omega_max_rad_s)
        robot.vx, robot.vy, robot.omega = vx, vy, omega
        # walls: clamp the target, then move straight toward it
        tx = min(max(robot.x_mm + vx * dt, r), cfg.width_mm - r)
        ty = min(max(robot.y_mm + vy * dt, r), cfg.height_mm - r)
        disps.append((tx - robot.x_mm, ty - robot.y_mm))

    scales = [1.0] * len(robots)
    for _ in range(8):
        collided = False
        for i in range(len(robots)):
            for j in range(i + 1, len(robots)):
                pix = starts[i][0] + scales[i] * disps[i][0] - starts[j][0] - scales[j] * disps[j][0]
                piy = starts[i][1] + scales[i] * disps[i][1] - starts[j][1] - scales[j] * disps[j][1]
                if math.hypot(pix, piy) >= 2 * r:
                    continue
                px = starts[i][0] - starts[j][0]
                py = starts[i][1] - starts[j][1]
                dx = disps[i][0] - disps[j][0]
                dy = disps[i][1] - disps[j][1]
                t = _pair_contact_time(px, py, dx, dy, 2 * r)
                stop = max(0.0, (t if t is not None else 0.0) - _CONTACT_BACKOFF)
                scales[i] = min(scales[i], stop)
                scales[j] = min(scales[j], stop)
                collided = True
        if not collided:
            break

    for robot, (sx, sy), (dx, dy), scale in zip(robots, starts, disps, scales):
        robot.x_mm = sx + scale * dx
        robot.y_mm = sy + scale * dy
        robot.theta_rad = wrap_angle(robot.theta_rad + robot.omega * dt)

    world.t_ms += dt_ms
    return world
