"""Binary masks with run-length backing and the pixel measures built on them.

Coordinate convention, used project-wide: x is the column index, y is the
row index, pixel (0, 0) is the top-left corner. A pixel is identified with
its integer lattice point, so the centroid of a single pixel at (3, 7) is
exactly (3.0, 7.0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Run = tuple[int, int, int]  # (row, start_col, length)


@dataclass(frozen=True)
class Mask:
    """Binary segmentation of one object on a width x height pixel grid.

    ``runs`` is the canonical run-length form: sorted by (row, start_col),
    runs in-bounds, no overlapping or touching runs on a row. The empty
    mask (no runs) is valid.
    """

    width: int
    height: int
    runs: tuple[Run, ...]

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"mask dimensions must be positive, got {self.width}x{self.height}")
        prev_row, prev_end = -1, -1
        for row, start, length in self.runs:
            if length <= 0:
                raise ValueError(f"run length must be positive, got {length}")
            if not (0 <= row < self.height) or start < 0 or start + length > self.width:
                raise ValueError(f"run ({row},{start},{length}) outside {self.width}x{self.height} grid")
            if row < prev_row or (row == prev_row and start <= prev_end):
                raise ValueError("runs not canonical: must be sorted and non-touching per row")
            prev_row, prev_end = row, start + length

    @staticmethod
    def from_runs(width: int, height: int, runs) -> "Mask":
        """Build a mask from possibly unsorted/overlapping runs, canonicalizing them."""
        by_row: dict[int, list[tuple[int, int]]] = {}
        for row, start, length in runs:
            if length <= 0:
                continue
            by_row.setdefault(row, []).append((start, start + length))
        canonical = []
        for row in sorted(by_row):
            spans = sorted(by_row[row])
            cur_s, cur_e = spans[0]
            for s, e in spans[1:]:
                if s <= cur_e:  # overlap or touch: merge
                    cur_e = max(cur_e, e)
                else:
                    canonical.append((row, cur_s, cur_e - cur_s))
                    cur_s, cur_e = s, e
            canonical.append((row, cur_s, cur_e - cur_s))
        return Mask(width, height, tuple(canonical))

    @staticmethod
    def empty(width: int, height: int) -> "Mask":
        return Mask(width, height, ())


@dataclass(frozen=True)
class Centroid:
    """Sub-pixel mass center of a non-empty mask."""

    x: float
    y: float


def area(m: Mask) -> int:
    """Number of set pixels."""
    return sum(length for _, _, length in m.runs)


def _check_same_grid(a: Mask, b: Mask):
    if a.width != b.width or a.height != b.height:
        raise ValueError(f"mask grids differ: {a.width}x{a.height} vs {b.width}x{b.height}")


def intersection_area(a: Mask, b: Mask) -> int:
    """Set-pixel count of a AND b, computed directly on the run lists."""
    _check_same_grid(a, b)
    inter = 0
    i, j = 0, 0
    ra, rb = a.runs, b.runs
    while i < len(ra) and j < len(rb):
        row_a, sa, la = ra[i]
        row_b, sb, lb = rb[j]
        if row_a < row_b:
            i += 1
        elif row_b < row_a:
            j += 1
        else:
            lo = max(sa, sb)
            hi = min(sa + la, sb + lb)
            if hi > lo:
                inter += hi - lo
            # advance the run that ends first
            if sa + la <= sb + lb:
                i += 1
            else:
                j += 1
    return inter


def iou(a: Mask, b: Mask) -> float:
    """Intersection over union in [0, 1].

    Two empty masks score 0, not 1: an empty prediction carries no evidence
    of identity, so mutual absence must not be rewarded.
    """
    inter = intersection_area(a, b)
    union = area(a) + area(b) - inter
    if union == 0:
        return 0.0
    return inter / union


def centroid(m: Mask) -> Centroid:
    """Mean of set-pixel coordinates.

    Accumulates exact integer sums before the single division, so the result
    does not depend on run order.
    """
    n = area(m)
    if n == 0:
        raise ValueError("centroid undefined for empty mask")
    sx = 0
    sy = 0
    for row, start, length in m.runs:
        # sum of start..start+length-1
        sx += length * (2 * start + length - 1) // 2
        sy += row * length
    return Centroid(sx / n, sy / n)


def shift(m: Mask, dx: int, dy: int) -> Mask:
    """Translate every set pixel by (dx, dy); pixels leaving the grid are dropped."""
    if dx == 0 and dy == 0:
        return m
    out = []
    for row, start, length in m.runs:
        r = row + dy
        if not (0 <= r < m.height):
            continue
        s = start + dx
        e = s + length
        s = max(s, 0)
        e = min(e, m.width)
        if e > s:
            out.append((r, s, e - s))
    return Mask(m.width, m.height, tuple(out))


def bounding_box(m: Mask) -> tuple[int, int, int, int] | None:
    """Inclusive (min_x, min_y, max_x, max_y) of set pixels, None for empty."""
    if not m.runs:
        return None
    min_x = min(start for _, start, _ in m.runs)
    max_x = max(start + length - 1 for _, start, length in m.runs)
    min_y = m.runs[0][0]
    max_y = m.runs[-1][0]
    return min_x, min_y, max_x, max_y


def rle_encode(bitmap: np.ndarray) -> Mask:
    """Encode a 2D boolean/0-1 array (indexed [row, col]) as a run-length mask."""
    arr = np.asarray(bitmap)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"bitmap must be a non-empty 2D array, got shape {arr.shape}")
    arr = arr != 0
    height, width = arr.shape
    runs = []
    for row in range(height):
        line = arr[row]
        if not line.any():
            continue
        padded = np.empty(width + 2, dtype=np.int8)
        padded[0] = padded[-1] = 0
        padded[1:-1] = line
        d = np.diff(padded)
        starts = np.flatnonzero(d == 1)
        ends = np.flatnonzero(d == -1)
        for s, e in zip(starts, ends):
            runs.append((row, int(s), int(e - s)))
    return Mask(width, height, tuple(runs))


def rle_decode(m: Mask) -> np.ndarray:
    """Decode a mask to a 2D boolean array indexed [row, col]."""
    out = np.zeros((m.height, m.width), dtype=bool)
    for row, start, length in m.runs:
        out[row, start : start + length] = True
    return out


def euclidean_similarity(a: Mask, b: Mask, d_max: float = 50.0) -> float:
    """Centroid-distance similarity max(0, 1 - d/d_max); 0 if either mask is empty.

    d_max is a tunable (default 50 px, about two cell diameters); it bounds
    the distance at which two detections stop counting as similar at all.
    """
    if d_max <= 0:
        raise ValueError(f"d_max must be positive, got {d_max}")
    if area(a) == 0 or area(b) == 0:
        return 0.0
    ca = centroid(a)
    cb = centroid(b)
    d = math.hypot(ca.x - cb.x, ca.y - cb.y)
    return max(0.0, 1.0 - d / d_max)
