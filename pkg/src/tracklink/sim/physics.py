"""Pairwise collision response on rasterized-mask overlap.

Masses are pixel areas. The impulse acts along the mask-centroid axis:
elastic two-body exchange of the normal velocity components, exact
component swap for equal masses. Damped mode additionally scales both
participants' velocities by 0.9 per collision. Overlapping bodies are
then pushed apart along the same axis until their masks are disjoint.
"""

from __future__ import annotations

import math

from ..geometry import area, centroid, intersection_area
from .objects import SimObject

MODE_NONE = "none"
MODE_RIGID = "rigid"
MODE_DAMPED = "damped"

_DAMPING = 0.9
_SEPARATION_STEP = 1.0
_MAX_SEPARATION_ITERS = 128


def _collision_axis(m1, m2) -> tuple[float, float] | None:
    c1, c2 = centroid(m1), centroid(m2)
    dx, dy = c2.x - c1.x, c2.y - c1.y
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return None
    return dx / norm, dy / norm


def _apply_impulse(o1: SimObject, o2: SimObject, m1: float, m2: float, nx: float, ny: float):
    u1 = o1.vx * nx + o1.vy * ny
    u2 = o2.vx * nx + o2.vy * ny
    if u1 - u2 <= 0.0:  # separating already, no impulse
        return
    if m1 == m2:
        new_u1, new_u2 = u2, u1
    else:
        new_u1 = ((m1 - m2) * u1 + 2.0 * m2 * u2) / (m1 + m2)
        new_u2 = ((m2 - m1) * u2 + 2.0 * m1 * u1) / (m1 + m2)
    o1.vx += (new_u1 - u1) * nx
    o1.vy += (new_u1 - u1) * ny
    o2.vx += (new_u2 - u2) * nx
    o2.vy += (new_u2 - u2) * ny


def _separate(o1: SimObject, o2: SimObject, m1: float, m2: float, nx: float, ny: float,
              width: int, height: int):
    share1 = m2 / (m1 + m2)
    share2 = m1 / (m1 + m2)
    for _ in range(_MAX_SEPARATION_ITERS):
        if intersection_area(o1.rasterize(width, height), o2.rasterize(width, height)) == 0:
            return
        o1.x -= _SEPARATION_STEP * share1 * nx
        o1.y -= _SEPARATION_STEP * share1 * ny
        o2.x += _SEPARATION_STEP * share2 * nx
        o2.y += _SEPARATION_STEP * share2 * ny


def resolve_collisions(objects: list[SimObject], mode: str, width: int, height: int) -> list[SimObject]:
    """Detect mask overlaps and apply the configured response in place."""
    if mode == MODE_NONE:
        return objects
    if mode not in (MODE_RIGID, MODE_DAMPED):
        raise ValueError(f"unknown collision mode {mode!r}")
    for _sweep in range(3):
        masks = [o.rasterize(width, height) for o in objects]
        any_hit = False
        for i in range(len(objects)):
            for j in range(i + 1, len(objects)):
                if intersection_area(masks[i], masks[j]) == 0:
                    continue
                axis = _collision_axis(masks[i], masks[j])
                if axis is None:
                    continue
                any_hit = True
                o1, o2 = objects[i], objects[j]
                m1, m2 = float(area(masks[i])), float(area(masks[j]))
                _apply_impulse(o1, o2, m1, m2, *axis)
                if mode == MODE_DAMPED:
                    o1.vx *= _DAMPING
                    o1.vy *= _DAMPING
                    o2.vx *= _DAMPING
                    o2.vy *= _DAMPING
                _separate(o1, o2, m1, m2, *axis, width, height)
                masks[i] = o1.rasterize(width, height)
                masks[j] = o2.rasterize(width, height)
        if not any_hit:
            break
    return objects
