"""Fill frame gaps in linked tracks by positional linear interpolation.

A skipped frame gets the last detected segmentation translated (shape
unchanged) so that its centroid lands on the time-weighted line between the
gap's two endpoint centroids. Translation is by whole pixels, rounded half
away from zero, so the realized centroid sits within 0.5 px per axis of the
exact interpolated position unless boundary clipping removes pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Centroid, Mask, area, centroid, shift
from .tracks import INTERPOLATED, GlobalTrack, TrackEntry


@dataclass(frozen=True)
class GapSpec:
    """One gap: last detection before it, next detection after it."""

    t_last: int
    t_next: int
    s_last: Mask
    c_last: Centroid
    c_next: Centroid

    def __post_init__(self):
        if self.t_next - self.t_last < 2:
            raise ValueError(f"gap needs t_next-t_last >= 2, got {self.t_last}..{self.t_next}")
        if area(self.s_last) == 0:
            raise ValueError("gap endpoint mask is empty")


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def interpolated_centroid(gap: GapSpec, t: int) -> Centroid:
    """Exact time-weighted centroid for frame t inside the gap."""
    if not (gap.t_last < t < gap.t_next):
        raise ValueError(f"t={t} not inside gap ({gap.t_last}, {gap.t_next})")
    span = gap.t_next - gap.t_last
    w_next = t - gap.t_last
    w_last = gap.t_next - t
    return Centroid(
        (w_next * gap.c_next.x + w_last * gap.c_last.x) / span,
        (w_next * gap.c_next.y + w_last * gap.c_last.y) / span,
    )


def interpolate_frame(gap: GapSpec, t: int) -> Mask:
    """Mask for skipped frame t: s_last shifted to the interpolated position."""
    c = interpolated_centroid(gap, t)
    dx = _round_half_away(c.x - gap.c_last.x)
    dy = _round_half_away(c.y - gap.c_last.y)
    return shift(gap.s_last, dx, dy)


def fill_all_gaps(track: GlobalTrack) -> GlobalTrack:
    """Return a track with contiguous frame coverage between first and last entry.

    Detected entries are untouched; filled entries are flagged interpolated.
    Idempotent: a gap-free track comes back unchanged. Gaps before the first
    or after the last detection are not extrapolated.
    """
    frames = track.frames
    if not frames:
        raise ValueError(f"track {track.track_id} has no entries")
    if track.is_contiguous():
        return track
    entries: dict[int, TrackEntry] = {}
    for t_last, t_next in track.occurrence_pairs():
        entries[t_last] = track.entries[t_last]
        if t_next - t_last < 2:
            continue
        s_last = track.entries[t_last].mask
        gap = GapSpec(t_last, t_next, s_last, centroid(s_last),
                      centroid(track.entries[t_next].mask))
        for t in range(t_last + 1, t_next):
            entries[t] = TrackEntry(interpolate_frame(gap, t), INTERPOLATED)
    entries[frames[-1]] = track.entries[frames[-1]]
    filled = GlobalTrack(track.track_id, entries)
    assert filled.is_contiguous()
    return filled
