"""Trajectory tracking: profile feedforward plus two PID regulators (one
on the 2D position error, one on heading), with proximity speed capping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..world.model import wrap_angle
from .profile import VelocityProfile
from .rrt import Path


@dataclass(frozen=True)
class PidGains:
    kp: float
    ki: float = 0.0
    kd: float = 0.0

    def __post_init__(self):
        if self.kp < 0 or self.ki < 0 or self.kd < 0:
            raise ValueError("gains must be non-negative")


DEFAULT_TRAJECTORY_GAINS = PidGains(kp=3.0, ki=0.4, kd=0.05)
DEFAULT_HEADING_GAINS = PidGains(kp=4.0, ki=0.0, kd=0.05)


class Pid:
    """Scalar PID with the integral clamped to ±(limit/ki)."""

    def __init__(self, gains: PidGains, output_limit: float):
        self.gains = gains
        self.output_limit = output_limit
        self.integral = 0.0
        self.prev_error: float | None = None

    def step(self, error: float, dt_s: float) -> float:
        g = self.gains
        derivative = 0.0
        if self.prev_error is not None and dt_s > 0:
            derivative = (error - self.prev_error) / dt_s
        self.prev_error = error
        if g.ki > 0:
            self.integral += error * dt_s
            bound = self.output_limit / g.ki
            self.integral = min(max(self.integral, -bound), bound)
        return g.kp * error + g.ki * self.integral + g.kd * derivative


def arc_point(path: Path, s_mm: float):
    """Point at arc length s plus the local unit tangent."""
    points = path.waypoints
    if len(points) == 1:
        return points[0], (1.0, 0.0)
    remaining = max(s_mm, 0.0)
    for a, b in zip(points, points[1:]):
        seg = math.hypot(b[0] - a[0], b[1] - a[1])
        if seg < 1e-12:
            continue
        if remaining <= seg:
            f = remaining / seg
            tangent = ((b[0] - a[0]) / seg, (b[1] - a[1]) / seg)
            return (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])), tangent
        remaining -= seg
    a, b = points[-2], points[-1]
    seg = math.hypot(b[0] - a[0], b[1] - a[1]) or 1.0
    return points[-1], ((b[0] - a[0]) / seg, (b[1] - a[1]) / seg)


class Tracker:
    """Follows one (path, profile) pair; owns the PID state."""

    def __init__(
        self,
        path: Path,
        profile: VelocityProfile,
        trajectory_gains: PidGains = DEFAULT_TRAJECTORY_GAINS,
        heading_gains: PidGains = DEFAULT_HEADING_GAINS,
        vmax_mm_s: float = 1000.0,
        omega_max_rad_s: float = 4.0,
    ):
        self.path = path
        self.profile = profile
        self.pid_x = Pid(trajectory_gains, vmax_mm_s)
        self.pid_y = Pid(trajectory_gains, vmax_mm_s)
        self.pid_heading = Pid(heading_gains, omega_max_rad_s)
        self.vmax = vmax_mm_s
        self.omega_max = omega_max_rad_s

    def step(self, pose, t_s: float, speed_cap: float, dt_s: float):
        """Velocity command at path time t: feedforward along the path plus
        PID corrections, translational magnitude clamped to speed_cap."""
        (rx, ry), tangent = arc_point(self.path, self.profile.position_mm(t_s))
        speed = self.profile.speed_mm_s(t_s)
        vx = tangent[0] * speed + self.pid_x.step(rx - pose[0], dt_s)
        vy = tangent[1] * speed + self.pid_y.step(ry - pose[1], dt_s)
        heading_error = wrap_angle(math.atan2(tangent[1], tangent[0]) - pose[2])
        omega = self.pid_heading.step(heading_error, dt_s)

        cap = min(speed_cap, self.vmax)
        norm = math.hypot(vx, vy)
        if norm > cap:
            scale = cap / norm if norm else 0.0
            vx, vy = vx * scale, vy * scale
        omega = min(max(omega, -self.omega_max), self.omega_max)
        return vx, vy, omega


def track_step(pose, path: Path, profile: VelocityProfile, t_s: float,
               trajectory_gains: PidGains = DEFAULT_TRAJECTORY_GAINS,
               heading_gains: PidGains = DEFAULT_HEADING_GAINS,
               speed_cap: float = 1000.0):
    """Single-shot command (fresh PID state): useful for stateless checks."""
    tracker = Tracker(path, profile, trajectory_gains, heading_gains, vmax_mm_s=speed_cap)
    return tracker.step(pose, t_s, speed_cap, dt_s=0.025)


def proximity_cap(
    own_pose,
    other_positions,
    d_full_mm: float = 600.0,
    d_stop_mm: float = 250.0,
    vmax_mm_s: float = 1000.0,
) -> float:
    """Speed limit from the nearest other robot: vmax above d_full, zero
    below d_stop, linear in between."""
    if d_stop_mm >= d_full_mm:
        raise ValueError("d_stop must be below d_full")
    if not other_positions:
        return vmax_mm_s
    nearest = min(math.hypot(p[0] - own_pose[0], p[1] - own_pose[1]) for p in other_positions)
    if nearest >= d_full_mm:
        return vmax_mm_s
    if nearest <= d_stop_mm:
        return 0.0
    return vmax_mm_s * (nearest - d_stop_mm) / (d_full_mm - d_stop_mm)
