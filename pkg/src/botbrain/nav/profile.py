"""Quintic minimum-jerk time scaling along a path.

Normalized position s(tau) = 10 tau^3 - 15 tau^4 + 6 tau^5 has zero
velocity and acceleration at both ends, peak speed 15L/(8T) at the
midpoint and peak acceleration 10L/(sqrt(3) T^2). The duration is the
smallest T satisfying both the speed and acceleration limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class VelocityProfile:
    length_mm: float
    duration_s: float
    vmax_mm_s: float
    amax_mm_s2: float

    def fraction(self, t_s: float) -> float:
        tau = min(max(t_s / self.duration_s, 0.0), 1.0)
        return tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau))

    def position_mm(self, t_s: float) -> float:
        return self.length_mm * self.fraction(t_s)

    def speed_mm_s(self, t_s: float) -> float:
        if not 0.0 <= t_s <= self.duration_s:
            return 0.0
        tau = t_s / self.duration_s
        ds = 30.0 * tau * tau * (1.0 - tau) ** 2
        return self.length_mm * ds / self.duration_s


def min_jerk_profile(length_mm: float, vmax_mm_s: float, amax_mm_s2: float) -> VelocityProfile:
    if length_mm <= 0 or vmax_mm_s <= 0 or amax_mm_s2 <= 0:
        raise ValueError("length, vmax and amax must be positive")
    t_speed = 15.0 * length_mm / (8.0 * vmax_mm_s)
    t_accel = math.sqrt(10.0 * length_mm / (math.sqrt(3.0) * amax_mm_s2))
    return VelocityProfile(
        length_mm=length_mm,
        duration_s=max(t_speed, t_accel),
        vmax_mm_s=vmax_mm_s,
        amax_mm_s2=amax_mm_s2,
    )
