"""Frame rendering: backgrounds, object styles, artifacts, quantization.

All intensities are relative in [0, 1] until the final 8-bit quantization.
The background field is static per recording (composite peak rescaled to the
configured maximum); uniform per-frame noise is added on top; flat-style
objects overwrite their pixels with the object's gray value, edge-style
objects contribute a blurred edge ring; artifact lines paint full white over
everything.
"""

from __future__ import annotations

import numpy as np

import cv2

from ..geometry import Mask, rle_decode

STYLE_FLAT = "flat"
STYLE_EDGE = "edge"


def make_background(width: int, height: int, n_bumps: int, peak: float, rng) -> np.ndarray:
    """Sum of random anisotropic Gaussian bumps, rescaled to the given peak."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    field = np.zeros((height, width), dtype=np.float64)
    for _ in range(n_bumps):
        cx = rng.uniform(0, width - 1)
        cy = rng.uniform(0, height - 1)
        sx = rng.uniform(30.0, 120.0)
        sy = rng.uniform(30.0, 120.0)
        amp = rng.uniform(0.3, 1.0)
        field += amp * np.exp(-0.5 * (((xx - cx) / sx) ** 2 + ((yy - cy) / sy) ** 2))
    top = field.max()
    if top > 0:
        field *= peak / top
    return field


def make_artifact_lines(width: int, height: int, n_lines: int, rng) -> np.ndarray:
    """Static full-brightness lines between uniform random border points."""
    img = np.zeros((height, width), dtype=np.float32)
    for _ in range(n_lines):
        p1 = _border_point(width, height, rng)
        p2 = _border_point(width, height, rng)
        cv2.line(img, p1, p2, color=1.0, thickness=1)
    return img.astype(np.float64)


def _border_point(width: int, height: int, rng) -> tuple[int, int]:
    side = int(rng.integers(4))
    if side == 0:
        return int(rng.integers(width)), 0
    if side == 1:
        return int(rng.integers(width)), height - 1
    if side == 2:
        return 0, int(rng.integers(height))
    return width - 1, int(rng.integers(height))


def render_frame(background: np.ndarray, objects_and_masks: list[tuple], style: str, rng,
                 noise_max: float = 0.078, canny_low: float = 0.1, canny_high: float = 0.3,
                 blur_kernel: int = 51, lines: np.ndarray | None = None) -> np.ndarray:
    """Compose one 8-bit frame from ground-truth masks and rendering style."""
    img = background.copy()
    if style == STYLE_FLAT:
        for obj, mask in objects_and_masks:
            for row, start, length in mask.runs:
                img[row, start : start + length] = obj.brightness
    elif style == STYLE_EDGE:
        edge = np.zeros_like(img)
        for _obj, mask in objects_and_masks:
            bitmap = (rle_decode(mask) * 255).astype(np.uint8)
            found = cv2.Canny(bitmap, canny_low * 255.0, canny_high * 255.0)
            np.maximum(edge, found / 255.0, out=edge)
        # sigmaX=0 lets cv2 derive sigma from the kernel size (the standard
        # 0.3*((k-1)/2 - 1) + 0.8 convention, sigma=8 for k=51)
        blurred = cv2.GaussianBlur(edge, (blur_kernel, blur_kernel), 0)
        top = blurred.max()
        if top > 0:
            blurred /= top
        img += blurred
    else:
        raise ValueError(f"unknown render style {style!r}")
    img += rng.uniform(0.0, noise_max, img.shape)
    if lines is not None:
        np.maximum(img, lines, out=img)
    return np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
