"""Polygon rasterization and the two simulated object geometries.

Rasterization uses even-odd scanline filling sampled at integer lattice
points: pixel (x, y) is set iff the point (x, y) lies inside the polygon
under a half-open crossing rule. This matches the project convention that a
pixel is its lattice point, and is exact for float vertices.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import Mask

# unit arrow: isoceles triangle pointing along +x, area 0.66
_ARROW_UNIT = np.array([(1.0, 0.0), (-0.6, 0.55), (-0.6, -0.55)])
_ARROW_UNIT_AREA = 0.5 * abs(
    (_ARROW_UNIT[1, 0] - _ARROW_UNIT[0, 0]) * (_ARROW_UNIT[2, 1] - _ARROW_UNIT[0, 1])
    - (_ARROW_UNIT[2, 0] - _ARROW_UNIT[0, 0]) * (_ARROW_UNIT[1, 1] - _ARROW_UNIT[0, 1])
)


def rasterize_polygon(xs: np.ndarray, ys: np.ndarray, width: int, height: int) -> Mask:
    """Even-odd scanline fill of a closed polygon, clipped to the grid."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.size < 3:
        raise ValueError("polygon needs >= 3 vertices")
    x2 = np.roll(xs, -1)
    y2 = np.roll(ys, -1)
    y_lo = max(0, int(math.ceil(ys.min())))
    y_hi = min(height - 1, int(math.floor(ys.max())))
    runs = []
    for y in range(y_lo, y_hi + 1):
        crossing = ((ys <= y) & (y < y2)) | ((y2 <= y) & (y < ys))
        if not crossing.any():
            continue
        t = (y - ys[crossing]) / (y2[crossing] - ys[crossing])
        cuts = np.sort(xs[crossing] + t * (x2[crossing] - xs[crossing]))
        for k in range(0, len(cuts) - 1, 2):
            x_start = max(int(math.ceil(cuts[k])), 0)
            x_end = min(int(math.ceil(cuts[k + 1])) - 1, width - 1)
            if x_end >= x_start:
                runs.append((y, x_start, x_end - x_start + 1))
    return Mask.from_runs(width, height, runs)


def arrow_polygon(x: float, y: float, scale: float, orientation: float) -> tuple[np.ndarray, np.ndarray]:
    """Triangle vertices for an arrow at (x, y) with the given heading."""
    c, s = math.cos(orientation), math.sin(orientation)
    vx = _ARROW_UNIT[:, 0] * scale
    vy = _ARROW_UNIT[:, 1] * scale
    return x + vx * c - vy * s, y + vx * s + vy * c


def arrow_scale_for_diameter(diameter: float) -> float:
    """Scale making the triangle's equivalent diameter 2*sqrt(area/pi) == diameter."""
    return diameter * math.sqrt(math.pi / (4.0 * _ARROW_UNIT_AREA))


def amoeboid_polygon(x: float, y: float, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Star-shaped contour from per-angle radii around (x, y)."""
    n = len(radii)
    theta = np.arange(n) * (2.0 * math.pi / n)
    return x + radii * np.cos(theta), y + radii * np.sin(theta)


def equivalent_diameter(pixel_area: int) -> float:
    return 2.0 * math.sqrt(pixel_area / math.pi)
