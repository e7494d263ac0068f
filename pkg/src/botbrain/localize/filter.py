"""Particle-filter pose estimation.

Multiple odometry sources drive the predict phase: the particle set is
partitioned into contiguous index blocks sized by the per-sensor
weighting, and each block is propagated by its source's delta. Beacon
range/bearing measurements drive the update phase after greedy nearest
data association; systematic resampling fires when the effective sample
size drops below half the particle count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..world.model import wrap_angle

SOURCES = ("wheel", "lidarScan", "cv")
DEFAULT_WEIGHTING = {"wheel": 0.4, "lidarScan": 0.4, "cv": 0.2}

_UNDERFLOW_LOG = math.log(1e-300)


@dataclass
class NoiseParams:
    sigma_xy_mm: float = 2.0
    sigma_theta_rad: float = 0.005


@dataclass
class ParticleSet:
    poses: np.ndarray  # (N, 3): x_mm, y_mm, theta_rad
    weights: np.ndarray  # (N,), normalized

    @classmethod
    def around(cls, pose, n: int, spread_mm: float, spread_rad: float, rng) -> "ParticleSet":
        poses = np.empty((n, 3))
        poses[:, 0] = pose[0] + rng.normal(0.0, spread_mm, n) if spread_mm else pose[0]
        poses[:, 1] = pose[1] + rng.normal(0.0, spread_mm, n) if spread_mm else pose[1]
        poses[:, 2] = pose[2] + (rng.normal(0.0, spread_rad, n) if spread_rad else 0.0)
        return cls(poses=poses, weights=np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return len(self.weights)


def normalize_weighting(weighting: dict, available: set) -> dict:
    """Restrict to available sources and renormalize the fractions."""
    kept = {k: v for k, v in weighting.items() if k in available and v > 0}
    if not kept:
        raise ValueError("no odometry source available")
    total = sum(kept.values())
    return {k: v / total for k, v in kept.items()}


def partition_counts(n: int, weighting: dict) -> dict:
    """Deterministic largest-remainder split of n particles by fraction,
    in canonical source order."""
    order = [s for s in SOURCES if s in weighting] + sorted(set(weighting) - set(SOURCES))
    floors = {s: int(n * weighting[s]) for s in order}
    leftover = n - sum(floors.values())
    remainders = sorted(order, key=lambda s: (-(n * weighting[s] - floors[s]), order.index(s)))
    for s in remainders[:leftover]:
        floors[s] += 1
    return floors


def predict(
    particles: ParticleSet,
    odometry_by_source: dict,
    weighting: dict | None = None,
    noise: NoiseParams | None = None,
    rng: np.random.Generator | None = None,
) -> ParticleSet:
    """Propagate each weighting partition by its source's local-frame delta
    plus Gaussian process noise. Particle count is preserved."""
    weighting = normalize_weighting(weighting or DEFAULT_WEIGHTING, set(odometry_by_source))
    noise = noise or NoiseParams()
    rng = rng or np.random.default_rng(0)
    n = len(particles)
    counts = partition_counts(n, weighting)

    poses = particles.poses.copy()
    start = 0
    for source in [s for s in SOURCES if s in counts] + sorted(set(counts) - set(SOURCES)):
        count = counts[source]
        if count == 0:
            continue
        block = slice(start, start + count)
        start += count
        dxl, dyl, dth = odometry_by_source[source]
        if noise.sigma_xy_mm:
            dx = dxl + rng.normal(0.0, noise.sigma_xy_mm, count)
            dy = dyl + rng.normal(0.0, noise.sigma_xy_mm, count)
        else:
            dx = np.full(count, dxl)
            dy = np.full(count, dyl)
        if noise.sigma_theta_rad:
            dt = dth + rng.normal(0.0, noise.sigma_theta_rad, count)
        else:
            dt = np.full(count, dth)
        cos_t = np.cos(poses[block, 2])
        sin_t = np.sin(poses[block, 2])
        poses[block, 0] += cos_t * dx - sin_t * dy
        poses[block, 1] += sin_t * dx + cos_t * dy
        poses[block, 2] += dt
    return ParticleSet(poses=poses, weights=particles.weights.copy())


def associate(measurements, predicted_pose, beacons, gate_mm: float = 500.0) -> dict:
    """Greedy nearest-first injective matching of measurements to beacons.

    Each measurement is projected into the field through the predicted
    pose, then matched to the closest expected beacon within ``gate_mm``;
    leftovers are discarded. Returns {measurement index: beacon index}.
    """
    if gate_mm <= 0:
        raise ValueError("gate must be positive")
    pairs = []
    for mi, m in enumerate(measurements):
        heading = predicted_pose[2] + m.bearing_rad
        px = predicted_pose[0] + m.range_mm * math.cos(heading)
        py = predicted_pose[1] + m.range_mm * math.sin(heading)
        for bi, (bx, by) in enumerate(beacons):
            d = math.hypot(px - bx, py - by)
            if d <= gate_mm:
                pairs.append((d, mi, bi))
    pairs.sort()
    match: dict[int, int] = {}
    used_beacons: set[int] = set()
    for _, mi, bi in pairs:
        if mi in match or bi in used_beacons:
            continue
        match[mi] = bi
        used_beacons.add(bi)
    return match


@dataclass
class UpdateResult:
    particles: ParticleSet
    resampled: bool
    degenerate: bool = False  # all likelihoods underflowed; weights reset to uniform


def update(
    particles: ParticleSet,
    measurements,
    association: dict,
    beacons,
    sigma_r_mm: float,
    sigma_b_rad: float,
    rng: np.random.Generator | None = None,
    resample_threshold: float = 0.5,
) -> UpdateResult:
    """Reweight by the product of range/bearing Gaussian likelihoods of the
    associated beacons, normalize, and systematically resample when the
    effective sample size falls below ``resample_threshold * N``."""
    if sigma_r_mm <= 0 or sigma_b_rad <= 0:
        raise ValueError("measurement noise scales must be positive")
    rng = rng or np.random.default_rng(0)
    poses = particles.poses
    log_w = np.log(np.maximum(particles.weights, 1e-300))
    for mi, bi in association.items():
        m = measurements[mi]
        bx, by = beacons[bi]
        dx = bx - poses[:, 0]
        dy = by - poses[:, 1]
        expected_r = np.hypot(dx, dy)
        expected_b = np.arctan2(dy, dx) - poses[:, 2]
        residual_r = m.range_mm - expected_r
        residual_b = np.arctan2(
            np.sin(m.bearing_rad - expected_b), np.cos(m.bearing_rad - expected_b)
        )
        log_w += -0.5 * (residual_r / sigma_r_mm) ** 2
        log_w += -0.5 * (residual_b / sigma_b_rad) ** 2

    # raw-likelihood underflow: even the best particle is inconsistent with
    # the measurements beyond double precision -> reset to uniform, flagged
    peak = log_w.max()
    degenerate = not np.isfinite(peak) or peak < _UNDERFLOW_LOG
    if degenerate:
        weights = np.full(len(particles), 1.0 / len(particles))
    else:
        weights = np.exp(log_w - peak)
        weights /= weights.sum()

    ess = 1.0 / np.square(weights).sum()
    resampled = False
    poses_out = particles.poses
    if not degenerate and ess < resample_threshold * len(particles):
        poses_out = _systematic_resample(particles.poses, weights, rng)
        weights = np.full(len(particles), 1.0 / len(particles))
        resampled = True
    return UpdateResult(
        particles=ParticleSet(poses=poses_out.copy(), weights=weights),
        resampled=resampled,
        degenerate=degenerate,
    )


def _systematic_resample(poses: np.ndarray, weights: np.ndarray, rng) -> np.ndarray:
    n = len(weights)
    positions = (rng.random() + np.arange(n)) / n
    cumulative = np.cumsum(weights)
    cumulative[-1] = 1.0
    indexes = np.searchsorted(cumulative, positions)
    return poses[indexes]


@dataclass
class Estimate:
    x_mm: float
    y_mm: float
    theta_rad: float
    covariance: np.ndarray  # 3x3

    @property
    def pose(self):
        return (self.x_mm, self.y_mm, self.theta_rad)


def estimate(particles: ParticleSet) -> Estimate:
    """Weighted mean pose (circular mean for the angle) and weighted
    covariance with angular deviations wrapped around the mean."""
    w = particles.weights
    poses = particles.poses
    x = float(np.dot(w, poses[:, 0]))
    y = float(np.dot(w, poses[:, 1]))
    sin_sum = float(np.dot(w, np.sin(poses[:, 2])))
    cos_sum = float(np.dot(w, np.cos(poses[:, 2])))
    theta = math.atan2(sin_sum, cos_sum)

    dev = np.empty_like(poses)
    dev[:, 0] = poses[:, 0] - x
    dev[:, 1] = poses[:, 1] - y
    dev[:, 2] = np.arctan2(np.sin(poses[:, 2] - theta), np.cos(poses[:, 2] - theta))
    cov = (w[:, None] * dev).T @ dev
    return Estimate(x_mm=x, y_mm=y, theta_rad=theta, covariance=cov)


@dataclass
class ParticleFilter:
    """Owns one robot's particle set, RNG and configuration."""

    beacons: list
    n_particles: int = 1000
    sigma_r_mm: float = 10.0
    sigma_b_rad: float = 0.02
    gate_mm: float = 500.0
    weighting: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTING))
    noise: NoiseParams = field(default_factory=NoiseParams)
    seed: int = 0

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)
        self.particles: ParticleSet | None = None
        self.degenerate_resets = 0

    def initialize(self, pose, spread_mm: float = 50.0, spread_rad: float = 0.05) -> None:
        self.particles = ParticleSet.around(
            pose, self.n_particles, spread_mm, spread_rad, self.rng
        )

    def predict(self, odometry_by_source: dict) -> None:
        self.particles = predict(
            self.particles, odometry_by_source, self.weighting, self.noise, self.rng
        )

    def update(self, measurements) -> UpdateResult:
        predicted = estimate(self.particles).pose
        association = associate(measurements, predicted, self.beacons, self.gate_mm)
        result = update(
            self.particles,
            measurements,
            association,
            self.beacons,
            self.sigma_r_mm,
            self.sigma_b_rad,
            self.rng,
        )
        self.particles = result.particles
        if result.degenerate:
            self.degenerate_resets += 1
        return result

    def estimate(self) -> Estimate:
        return estimate(self.particles)
