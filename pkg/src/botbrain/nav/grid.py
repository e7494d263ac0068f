"""Binary occupancy grid at 10 mm resolution: static borders and holders
plus inflated circles for every dynamic object."""

from __future__ import annotations

import math

import numpy as np

from ..world.model import CAKE_RADIUS_MM, WorldState


class OccupancyGrid:
    def __init__(self, width_mm: int, height_mm: int, cell_mm: int, static_layer: np.ndarray):
        self.width_mm = width_mm
        self.height_mm = height_mm
        self.cell_mm = cell_mm
        self.cols = width_mm // cell_mm
        self.rows = height_mm // cell_mm
        if static_layer.shape != (self.rows, self.cols):
            raise ValueError("static layer shape does not match the field")
        self.static_layer = static_layer
        self.dynamic_layer = np.zeros_like(static_layer)

    @property
    def composite(self) -> np.ndarray:
        return self.static_layer | self.dynamic_layer

    def _cell_centers(self):
        xs = (np.arange(self.cols) + 0.5) * self.cell_mm
        ys = (np.arange(self.rows) + 0.5) * self.cell_mm
        return xs, ys

    def add_circle(self, x_mm: float, y_mm: float, radius_mm: float) -> None:
        """Mark every cell whose center lies within the circle."""
        c = self.cell_mm
        ix0 = max(int((x_mm - radius_mm) / c) - 1, 0)
        ix1 = min(int((x_mm + radius_mm) / c) + 2, self.cols)
        iy0 = max(int((y_mm - radius_mm) / c) - 1, 0)
        iy1 = min(int((y_mm + radius_mm) / c) + 2, self.rows)
        if ix0 >= ix1 or iy0 >= iy1:
            return
        xs = (np.arange(ix0, ix1) + 0.5) * c
        ys = (np.arange(iy0, iy1) + 0.5) * c
        dist2 = (xs[None, :] - x_mm) ** 2 + (ys[:, None] - y_mm) ** 2
        self.dynamic_layer[iy0:iy1, ix0:ix1] |= (dist2 <= radius_mm**2).astype(np.uint8)

    def clear_dynamic_circle(self, x_mm: float, y_mm: float, radius_mm: float) -> None:
        """Free dynamic cells around a point: lets a robot plan out of the
        inflation halo it is already standing in."""
        c = self.cell_mm
        ix0 = max(int((x_mm - radius_mm) / c) - 1, 0)
        ix1 = min(int((x_mm + radius_mm) / c) + 2, self.cols)
        iy0 = max(int((y_mm - radius_mm) / c) - 1, 0)
        iy1 = min(int((y_mm + radius_mm) / c) + 2, self.rows)
        if ix0 >= ix1 or iy0 >= iy1:
            return
        xs = (np.arange(ix0, ix1) + 0.5) * c
        ys = (np.arange(iy0, iy1) + 0.5) * c
        inside = (xs[None, :] - x_mm) ** 2 + (ys[:, None] - y_mm) ** 2 <= radius_mm**2
        self.dynamic_layer[iy0:iy1, ix0:ix1] &= (~inside).astype(np.uint8)

    def cell_of(self, x_mm: float, y_mm: float) -> tuple[int, int]:
        ix = min(max(int(x_mm / self.cell_mm), 0), self.cols - 1)
        iy = min(max(int(y_mm / self.cell_mm), 0), self.rows - 1)
        return iy, ix

    def point_occupied(self, x_mm: float, y_mm: float) -> bool:
        if not (0 <= x_mm <= self.width_mm and 0 <= y_mm <= self.height_mm):
            return True
        iy, ix = self.cell_of(x_mm, y_mm)
        return bool(self.composite[iy, ix])

    def segment_free(self, a: tuple[float, float], b: tuple[float, float]) -> bool:
        """Exact supercover check: every cell the segment passes through is
        inspected (midpoint of each span between grid-line crossings)."""
        for p in (a, b):
            if not (0 <= p[0] <= self.width_mm and 0 <= p[1] <= self.height_mm):
                return False
        dx, dy = b[0] - a[0], b[1] - a[1]
        c = self.cell_mm
        crossings = [np.array([0.0, 1.0])]
        if dx:
            k0, k1 = sorted((a[0] / c, b[0] / c))
            ks = np.arange(math.ceil(k0), math.floor(k1) + 1)
            crossings.append((ks * c - a[0]) / dx)
        if dy:
            k0, k1 = sorted((a[1] / c, b[1] / c))
            ks = np.arange(math.ceil(k0), math.floor(k1) + 1)
            crossings.append((ks * c - a[1]) / dy)
        ts = np.unique(np.clip(np.concatenate(crossings), 0.0, 1.0))
        mids = (ts[:-1] + ts[1:]) / 2 if len(ts) > 1 else np.array([0.5])
        xs = a[0] + mids * dx
        ys = a[1] + mids * dy
        ixs = np.clip((xs / c).astype(int), 0, self.cols - 1)
        iys = np.clip((ys / c).astype(int), 0, self.rows - 1)
        return not self.composite[iys, ixs].any()

    def nearest_free(self, x_mm: float, y_mm: float, max_radius_mm: float = 600.0):
        """Closest free cell center; used to snap goals that sit inside an
        inflated obstacle (e.g. approach poses next to a cake)."""
        if not self.point_occupied(x_mm, y_mm):
            return (x_mm, y_mm)
        occ = self.composite
        free_iy, free_ix = np.nonzero(occ == 0)
        if len(free_ix) == 0:
            return None
        cx = (free_ix + 0.5) * self.cell_mm
        cy = (free_iy + 0.5) * self.cell_mm
        dist2 = (cx - x_mm) ** 2 + (cy - y_mm) ** 2
        best = int(np.argmin(dist2))
        if dist2[best] > max_radius_mm**2:
            return None
        return (float(cx[best]), float(cy[best]))

    def to_pgm(self) -> bytes:
        """Binary PGM dump for debugging (free=255, occupied=0)."""
        img = ((1 - self.composite) * 255).astype(np.uint8)
        header = f"P5\n{self.cols} {self.rows}\n255\n".encode()
        return header + img.tobytes()


def static_layer_for(
    width_mm: int, height_mm: int, cell_mm: int, holder_rects: list[tuple] | None = None
) -> np.ndarray:
    """Border ring plus fixed holder rectangles (x0, y0, x1, y1 in mm)."""
    rows, cols = height_mm // cell_mm, width_mm // cell_mm
    layer = np.zeros((rows, cols), dtype=np.uint8)
    layer[0, :] = layer[-1, :] = 1
    layer[:, 0] = layer[:, -1] = 1
    for x0, y0, x1, y1 in holder_rects or []:
        ix0, ix1 = max(int(x0 / cell_mm), 0), min(int(math.ceil(x1 / cell_mm)), cols)
        iy0, iy1 = max(int(y0 / cell_mm), 0), min(int(math.ceil(y1 / cell_mm)), rows)
        layer[iy0:iy1, ix0:ix1] = 1
    return layer


DEFAULT_HOLDER_RECTS = [
    (1470.0, 0.0, 1530.0, 220.0),
    (1470.0, 1780.0, 1530.0, 2000.0),
]


def build_grid(
    world: WorldState,
    inflation_mm: float,
    exclude_robot_id: str | None = None,
    holder_rects: list[tuple] | None = DEFAULT_HOLDER_RECTS,
    include_cakes: bool = True,
) -> OccupancyGrid:
    """Snapshot grid: static layer plus an inflated circle per robot and
    (optionally) per cake. ``inflation_mm`` must cover the robot radius."""
    cfg = world.config
    if inflation_mm < cfg.robot_radius_mm:
        raise ValueError("inflation must be at least the robot radius")
    grid = OccupancyGrid(
        cfg.width_mm, cfg.height_mm, cfg.cell_mm,
        static_layer_for(cfg.width_mm, cfg.height_mm, cfg.cell_mm, holder_rects),
    )
    for robot in world.robots:
        if robot.id == exclude_robot_id:
            continue
        grid.add_circle(robot.x_mm, robot.y_mm, cfg.robot_radius_mm + inflation_mm)
    if include_cakes:
        for cake in world.cakes:
            grid.add_circle(cake.x_mm, cake.y_mm, CAKE_RADIUS_MM + inflation_mm)
    return grid
