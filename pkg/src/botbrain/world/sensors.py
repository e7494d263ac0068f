"""Noisy ground-truth sensing: beacon range/bearing and odometry deltas."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import WorldState, wrap_angle


@dataclass(frozen=True)
class BeaconMeasurement:
    range_mm: float
    bearing_rad: float
    true_index: int  # withheld from the localizer; kept for test oracles


def sense_beacons(
    world: WorldState,
    robot_id: str,
    sigma_r_mm: float = 0.0,
    sigma_b_rad: float = 0.0,
    seed: int = 0,
) -> list[BeaconMeasurement]:
    """One range/bearing measurement per beacon, Gaussian-perturbed and
    shuffled so association stays the localizer's job."""
    if sigma_r_mm < 0 or sigma_b_rad < 0:
        raise ValueError("noise scales must be non-negative")
    robot = world.robot(robot_id)
    rng = np.random.default_rng(seed)
    out = []
    for idx, (bx, by) in enumerate(world.config.beacons):
        true_range = math.hypot(bx - robot.x_mm, by - robot.y_mm)
        true_bearing = wrap_angle(math.atan2(by - robot.y_mm, bx - robot.x_mm) - robot.theta_rad)
        out.append(
            BeaconMeasurement(
                range_mm=true_range + rng.normal(0.0, sigma_r_mm) if sigma_r_mm else true_range,
                bearing_rad=wrap_angle(
                    true_bearing + (rng.normal(0.0, sigma_b_rad) if sigma_b_rad else 0.0)
                ),
                true_index=idx,
            )
        )
    rng.shuffle(out)
    return out


def local_delta(prev_pose, new_pose) -> tuple[float, float, float]:
    """Pose increment expressed in the previous pose's frame."""
    dx = new_pose[0] - prev_pose[0]
    dy = new_pose[1] - prev_pose[1]
    cos_t, sin_t = math.cos(prev_pose[2]), math.sin(prev_pose[2])
    return (
        cos_t * dx + sin_t * dy,
        -sin_t * dx + cos_t * dy,
        wrap_angle(new_pose[2] - prev_pose[2]),
    )


class OdometrySensor:
    """Per-robot incremental odometry with multiplicative slip noise.

    Call once per step: returns the local-frame delta since the previous
    call, each component scaled by an independent (1 + eps) slip factor.
    A stationary robot therefore reads an exactly zero delta.
    """

    def __init__(self, world: WorldState, robot_id: str, slip_sigma: float = 0.0, seed: int = 0):
        self.robot_id = robot_id
        self.slip_sigma = slip_sigma
        self.rng = np.random.default_rng(seed)
        self._last_pose = world.robot(robot_id).pose

    def sense(self, world: WorldState) -> tuple[float, float, float]:
        pose = world.robot(self.robot_id).pose
        delta = local_delta(self._last_pose, pose)
        self._last_pose = pose
        if not self.slip_sigma:
            return delta
        slips = self.rng.normal(0.0, self.slip_sigma, size=3)
        return (
            delta[0] * (1.0 + slips[0]),
            delta[1] * (1.0 + slips[1]),
            delta[2] * (1.0 + slips[2]),
        )
