"""Seed-deterministic scene generation for the five synthetic benchmark kinds.

Every random draw derives from the config seed through fixed-purpose
substreams, so simulate(config) is a pure function of its config. Objects
are kept inside the field of view by reflecting their velocity at a margin,
because the ground truth must provide one non-empty mask per object per
frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import Mask, area, intersection_area
from ..tracks import DETECTED, GlobalTrack, Recording, TrackEntry
from .objects import AMOEBOID, ARROW, SimObject
from .perlin import perlin_1d_periodic
from .physics import MODE_DAMPED, MODE_NONE, MODE_RIGID, resolve_collisions
from .render import STYLE_EDGE, STYLE_FLAT, make_artifact_lines, make_background, render_frame
from .shapes import arrow_scale_for_diameter, equivalent_diameter

KINDS = ("arrows", "amoeboids", "amoeboids_pc", "amoeboids_pcc", "amoeboids_pcca")

# kind -> (object shape, collision mode, render style, static line artifacts)
_KIND_SPECS = {
    "arrows": (ARROW, MODE_NONE, STYLE_FLAT, False),
    "amoeboids": (AMOEBOID, MODE_RIGID, STYLE_FLAT, False),
    "amoeboids_pc": (AMOEBOID, MODE_RIGID, STYLE_EDGE, False),
    "amoeboids_pcc": (AMOEBOID, MODE_DAMPED, STYLE_EDGE, False),
    "amoeboids_pcca": (AMOEBOID, MODE_DAMPED, STYLE_EDGE, True),
}

# substream tags for SeedSequence entropy tuples
_TAG_SPAWN = 0
_TAG_MOTION = 1
_TAG_BACKGROUND = 2
_TAG_NOISE = 3
_TAG_LINES = 4
_TAG_ARROW_STEP = 5
_TAG_SHAPE_STEP = 6


@dataclass(frozen=True)
class SimConfig:
    kind: str
    n_objects: int = 8
    width: int = 512
    height: int = 512
    frames: int = 100
    seed: int = 0
    # kinematics: mean speed as a fraction of mean object size, size-independent
    speed_to_size: float = 0.40
    # arrows
    arrow_diameter_range: tuple[float, float] = (8.0, 48.0)  # ratio <= 6
    rotation_max_deg: float = 10.0
    expand_p: float = 0.33
    expand_range: tuple[float, float] = (1.016, 1.100)
    # amoeboids
    radius_range: tuple[float, float] = (10.0, 26.0)
    contour_points: int = 50
    octaves: int = 6
    persistence: float = 0.5
    lacunarity: float = 2.0
    noise_amp: float = 0.3
    step_eps_factor: float = 0.08
    step_sigma_factor: float = 0.3
    radius_clamp: tuple[float, float] = (0.35, 1.8)
    center_pull: float = 0.02
    # rendering
    bg_bumps: int = 10
    bg_max: float = 0.39
    noise_max: float = 0.078
    brightness_min: float = 0.39
    canny_low: float = 0.1
    canny_high: float = 0.3
    blur_kernel: int = 51
    n_artifact_lines: int = 100

    def __post_init__(self):
        if self.kind not in _KIND_SPECS:
            raise ValueError(f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if self.width <= 0 or self.height <= 0 or self.frames < 1 or self.n_objects < 0:
            raise ValueError("dimensions and frame count must be positive")
        if not (0.0 <= self.noise_amp < 1.0):
            raise ValueError("noise_amp must be in [0, 1) to keep radii positive")

    @property
    def shape_kind(self) -> str:
        return _KIND_SPECS[self.kind][0]

    @property
    def collision_mode(self) -> str:
        return _KIND_SPECS[self.kind][1]

    @property
    def render_style(self) -> str:
        return _KIND_SPECS[self.kind][2]

    @property
    def has_artifacts(self) -> bool:
        return _KIND_SPECS[self.kind][3]


def _rng(*entropy) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _brightness(config: SimConfig, rng) -> float:
    # uniform in (brightness_min, 1]
    return 1.0 - rng.random() * (1.0 - config.brightness_min)


def _place(obj: SimObject, config: SimConfig, rng, existing: list[SimObject]):
    """Draw non-overlapping positions until placement succeeds."""
    margin = min(obj.bounding_radius() + 2.0, 0.45 * min(config.width, config.height))
    existing_masks = [o.rasterize(config.width, config.height) for o in existing]
    for _ in range(1000):
        obj.x = rng.uniform(margin, config.width - 1 - margin)
        obj.y = rng.uniform(margin, config.height - 1 - margin)
        mask = obj.rasterize(config.width, config.height)
        if area(mask) and all(intersection_area(mask, m) == 0 for m in existing_masks):
            return
    raise RuntimeError(f"could not place object {obj.obj_id} without overlap after 1000 tries")


def spawn_amoeboid(config: SimConfig, seed, existing: list[SimObject] = (), obj_id: int = 0) -> SimObject:
    """Perlin-contoured object in the configured radius band, placed without overlap."""
    rng = _rng(*seed) if isinstance(seed, tuple) else _rng(seed)
    r_nom = rng.uniform(*config.radius_range)
    noise = perlin_1d_periodic(config.contour_points, config.octaves, config.persistence,
                               config.lacunarity, seed=rng.integers(2**32))
    obj = SimObject(
        obj_id=obj_id, shape_kind=AMOEBOID, x=0.0, y=0.0,
        brightness=_brightness(config, rng),
        r_nom=r_nom,
        radii=r_nom * (1.0 + config.noise_amp * noise),
        step_eps=config.step_eps_factor * r_nom,
        step_sigma=config.step_sigma_factor * r_nom,
        r_lo=config.radius_clamp[0] * r_nom,
        r_hi=config.radius_clamp[1] * r_nom,
    )
    _place(obj, config, rng, list(existing))
    return obj


def spawn_arrow(config: SimConfig, seed, existing: list[SimObject] = (), obj_id: int = 0) -> SimObject:
    """Triangle in the configured diameter band, placed without overlap."""
    rng = _rng(*seed) if isinstance(seed, tuple) else _rng(seed)
    diameter = rng.uniform(*config.arrow_diameter_range)
    obj = SimObject(
        obj_id=obj_id, shape_kind=ARROW, x=0.0, y=0.0,
        orientation=rng.uniform(0.0, 2.0 * math.pi),
        brightness=_brightness(config, rng),
        scale=arrow_scale_for_diameter(diameter),
    )
    _place(obj, config, rng, list(existing))
    return obj


def _reflect(value: float, lo: float, hi: float, velocity: float) -> tuple[float, float]:
    for _ in range(8):
        if value < lo:
            value = 2.0 * lo - value
            velocity = -velocity
        elif value > hi:
            value = 2.0 * hi - value
            velocity = -velocity
        else:
            return value, velocity
    return min(max(value, lo), hi), velocity


def _translate(obj: SimObject, config: SimConfig):
    margin = min(obj.bounding_radius() + 2.0, 0.4 * min(config.width, config.height))
    obj.x += obj.vx
    obj.y += obj.vy
    obj.x, obj.vx = _reflect(obj.x, margin, config.width - 1 - margin, obj.vx)
    obj.y, obj.vy = _reflect(obj.y, margin, config.height - 1 - margin, obj.vy)


def step_arrow(obj: SimObject, config: SimConfig, rng) -> SimObject:
    """One frame of arrow motion: bounded rotation, chance expansion, translation."""
    max_rot = math.radians(config.rotation_max_deg)
    obj.orientation += rng.uniform(-max_rot, max_rot)
    if rng.random() < config.expand_p:
        obj.scale *= rng.uniform(*config.expand_range)
    _translate(obj, config)
    return obj


def step_amoeboid_shape(obj: SimObject, seed_t) -> SimObject:
    """One frame of contour change, Gaussian-weighted toward the nominal radius.

    Vertices at the nominal radius move the most; outliers are pulled less,
    and the hard clamp keeps the object from vanishing or filling its space.
    """
    noise = perlin_1d_periodic(len(obj.radii), seed=seed_t)
    weight = np.exp(-((obj.radii - obj.r_nom) ** 2) / (2.0 * obj.step_sigma**2))
    obj.radii = np.clip(obj.radii + obj.step_eps * noise * weight, obj.r_lo, obj.r_hi)
    return obj


def _assign_velocities(objects: list[SimObject], config: SimConfig, rng, mean_size: float):
    target = config.speed_to_size * mean_size
    sigma = target * math.sqrt(math.pi / 2.0)  # half-normal with mean == target
    for obj in objects:
        speed = abs(rng.normal(0.0, sigma))
        phi = rng.uniform(0.0, 2.0 * math.pi)
        obj.vx = speed * math.cos(phi)
        obj.vy = speed * math.sin(phi)


def simulate(config: SimConfig) -> tuple[Recording, list[GlobalTrack]]:
    """Generate a recording plus exact ground-truth identity tracks."""
    spawn = spawn_arrow if config.shape_kind == ARROW else spawn_amoeboid
    objects: list[SimObject] = []
    for i in range(config.n_objects):
        objects.append(spawn(config, (config.seed, _TAG_SPAWN, i), objects, obj_id=i))

    sizes = [equivalent_diameter(area(o.rasterize(config.width, config.height))) for o in objects]
    mean_size = float(np.mean(sizes)) if sizes else 0.0
    _assign_velocities(objects, config, _rng(config.seed, _TAG_MOTION), mean_size)

    background = make_background(config.width, config.height, config.bg_bumps, config.bg_max,
                                 _rng(config.seed, _TAG_BACKGROUND))
    lines = None
    if config.has_artifacts:
        lines = make_artifact_lines(config.width, config.height, config.n_artifact_lines,
                                    _rng(config.seed, _TAG_LINES))
    rng_noise = _rng(config.seed, _TAG_NOISE)
    rng_step = _rng(config.seed, _TAG_ARROW_STEP)

    cx, cy = (config.width - 1) / 2.0, (config.height - 1) / 2.0
    gt: list[dict[int, TrackEntry]] = [{} for _ in objects]
    images = []
    for frame in range(config.frames):
        masks = [o.rasterize(config.width, config.height) for o in objects]
        for obj, mask in zip(objects, masks):
            if area(mask) == 0:
                raise RuntimeError(f"object {obj.obj_id} left the field of view at frame {frame}")
            gt[obj.obj_id][frame] = TrackEntry(mask, DETECTED)
        images.append(render_frame(background, list(zip(objects, masks)), config.render_style,
                                   rng_noise, config.noise_max, config.canny_low,
                                   config.canny_high, config.blur_kernel, lines))
        if frame == config.frames - 1:
            break
        if config.shape_kind == ARROW:
            for obj in objects:
                step_arrow(obj, config, rng_step)
        else:
            for obj in objects:
                step_amoeboid_shape(obj, (config.seed, _TAG_SHAPE_STEP, obj.obj_id, frame))
                if config.collision_mode == MODE_DAMPED:
                    d = math.hypot(cx - obj.x, cy - obj.y)
                    if d > 0:
                        obj.vx += config.center_pull * (cx - obj.x) / d
                        obj.vy += config.center_pull * (cy - obj.y) / d
                _translate(obj, config)
            resolve_collisions(objects, config.collision_mode, config.width, config.height)

    recording = Recording(config.width, config.height, config.frames, tuple(images))
    gt_tracks = [GlobalTrack(i, entries) for i, entries in enumerate(gt)]
    return recording, gt_tracks


def empty_scene_frame(config: SimConfig) -> np.ndarray:
    """Background plus noise only; handy for brightness-bound checks."""
    background = make_background(config.width, config.height, config.bg_bumps, config.bg_max,
                                 _rng(config.seed, _TAG_BACKGROUND))
    return render_frame(background, [], STYLE_FLAT, _rng(config.seed, _TAG_NOISE),
                        config.noise_max)
