from .objects import AMOEBOID, ARROW, SimObject
from .perlin import perlin_1d_periodic
from .physics import MODE_DAMPED, MODE_NONE, MODE_RIGID, resolve_collisions
from .render import make_artifact_lines, make_background, render_frame
from .scene import (
    KINDS,
    SimConfig,
    empty_scene_frame,
    simulate,
    spawn_amoeboid,
    spawn_arrow,
    step_amoeboid_shape,
    step_arrow,
)
from .shapes import equivalent_diameter, rasterize_polygon

__all__ = [
    "AMOEBOID",
    "ARROW",
    "KINDS",
    "MODE_DAMPED",
    "MODE_NONE",
    "MODE_RIGID",
    "SimConfig",
    "SimObject",
    "empty_scene_frame",
    "equivalent_diameter",
    "make_artifact_lines",
    "make_background",
    "perlin_1d_periodic",
    "rasterize_polygon",
    "render_frame",
    "resolve_collisions",
    "simulate",
    "spawn_amoeboid",
    "spawn_arrow",
    "step_amoeboid_shape",
    "step_arrow",
]
