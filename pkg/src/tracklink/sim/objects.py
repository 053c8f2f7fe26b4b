"""Mutable simulation object state shared by the stepping and physics code."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import Mask
from .shapes import amoeboid_polygon, arrow_polygon, rasterize_polygon

ARROW = "arrow"
AMOEBOID = "amoeboid"


@dataclass
class SimObject:
    obj_id: int
    shape_kind: str
    x: float
    y: float
    vx: float = 0.0
    vy: float = 0.0
    orientation: float = 0.0
    brightness: float = 1.0
    # arrows
    scale: float = 0.0
    # amoeboids
    r_nom: float = 0.0
    radii: np.ndarray | None = field(default=None, repr=False)
    step_eps: float = 0.0
    step_sigma: float = 1.0
    r_lo: float = 0.0
    r_hi: float = 0.0

    def polygon(self) -> tuple[np.ndarray, np.ndarray]:
        if self.shape_kind == ARROW:
            return arrow_polygon(self.x, self.y, self.scale, self.orientation)
        return amoeboid_polygon(self.x, self.y, self.radii)

    def rasterize(self, width: int, height: int) -> Mask:
        xs, ys = self.polygon()
        return rasterize_polygon(xs, ys, width, height)

    def bounding_radius(self) -> float:
        if self.shape_kind == ARROW:
            return self.scale * 1.0
        return float(self.radii.max())
