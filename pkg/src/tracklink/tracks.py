"""Data model for detections, time-symmetric local tracks and global tracks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import Mask, area

DETECTED = "detected"
INTERPOLATED = "interpolated"


@dataclass(frozen=True)
class Detection:
    """One segmented instance on one frame."""

    detection_id: int
    frame: int
    mask: Mask

    def __post_init__(self):
        if self.frame < 0:
            raise ValueError(f"frame must be >= 0, got {self.frame}")
        if area(self.mask) == 0:
            raise ValueError(f"detection {self.detection_id} has an empty mask")


@dataclass(frozen=True)
class LocalTrack:
    """Per-detection mask predictions over offsets -tr..+tr around the anchor.

    ``window`` holds exactly 2*tr+1 masks indexed by offset+tr. Entries may
    be empty masks (the predictor may report "absent"); the offset-0 entry is
    the anchor's own segmentation and is always non-empty. Entries whose
    nominal frame falls outside the recording mirror the nearest valid
    frame's prediction; ``window_frames`` recovers which ones those are.
    """

    anchor: Detection
    tr: int
    window: tuple[Mask, ...]

    def __post_init__(self):
        if self.tr < 1:
            raise ValueError(f"tracking range must be >= 1, got {self.tr}")
        if len(self.window) != 2 * self.tr + 1:
            raise ValueError(f"window must hold {2 * self.tr + 1} entries, got {len(self.window)}")
        if self.window[self.tr].runs != self.anchor.mask.runs:
            raise ValueError("offset-0 window entry must equal the anchor mask")

    def entry(self, offset: int) -> Mask:
        if not (-self.tr <= offset <= self.tr):
            raise ValueError(f"offset {offset} outside [-{self.tr}, {self.tr}]")
        return self.window[offset + self.tr]


def window_frames(lt: LocalTrack, recording_length: int) -> list[tuple[int, int, bool]]:
    """Map window offsets to (offset, absolute_frame, is_padding).

    Nominal frames outside [0, recording_length) are clamped to the nearest
    valid frame and flagged as padding, mirroring how windows are built by
    repeating the first or last frame at recording boundaries.
    """
    if recording_length < 1:
        raise ValueError("recording_length must be >= 1")
    out = []
    for offset in range(-lt.tr, lt.tr + 1):
        nominal = lt.anchor.frame + offset
        clamped = min(max(nominal, 0), recording_length - 1)
        out.append((offset, clamped, clamped != nominal))
    return out


def overlap(lt_a: LocalTrack, lt_b: LocalTrack) -> list[tuple[Mask, Mask]]:
    """Mask pairs of two local tracks on their shared frames.

    For anchors delta_t apart there are exactly 2*tr+1-delta_t shared
    frames; entries are aligned by nominal frame (anchor + offset), so
    padded entries participate with their mirrored predictions.
    """
    if lt_a.tr != lt_b.tr:
        raise ValueError(f"tracking ranges differ: {lt_a.tr} vs {lt_b.tr}")
    tr = lt_a.tr
    delta_t = lt_b.anchor.frame - lt_a.anchor.frame
    if delta_t < 1:
        raise ValueError(f"second track must be later than the first, got delta_t={delta_t}")
    if delta_t > 2 * tr:
        raise ValueError(f"delta_t={delta_t} exceeds maximal matching distance {2 * tr}")
    pairs = []
    # shared nominal frames run from b.anchor-tr to a.anchor+tr
    for f in range(lt_b.anchor.frame - tr, lt_a.anchor.frame + tr + 1):
        pairs.append((lt_a.entry(f - lt_a.anchor.frame), lt_b.entry(f - lt_b.anchor.frame)))
    return pairs


@dataclass
class TrackEntry:
    mask: Mask
    provenance: str = DETECTED
    detection_id: int | None = None

    def __post_init__(self):
        if self.provenance not in (DETECTED, INTERPOLATED):
            raise ValueError(f"bad provenance {self.provenance!r}")


@dataclass
class GlobalTrack:
    """A linked identity: one mask per covered frame with provenance."""

    track_id: int
    entries: dict[int, TrackEntry] = field(default_factory=dict)

    def __post_init__(self):
        frames = list(self.entries)
        if frames != sorted(frames):
            self.entries = {f: self.entries[f] for f in sorted(frames)}

    @property
    def frames(self) -> list[int]:
        return list(self.entries)

    @property
    def first_frame(self) -> int:
        return next(iter(self.entries))

    @property
    def last_frame(self) -> int:
        return next(reversed(self.entries))

    def is_contiguous(self) -> bool:
        frames = self.frames
        return not frames or frames == list(range(frames[0], frames[-1] + 1))

    def occurrence_pairs(self) -> list[tuple[int, int]]:
        """Consecutive-occurrence frame pairs; spans gaps if any remain."""
        frames = self.frames
        return list(zip(frames, frames[1:]))


@dataclass(frozen=True)
class Recording:
    """Recording geometry plus optional per-frame 8-bit grayscale images."""

    width: int
    height: int
    length: int
    frames: tuple | None = None  # tuple of HxW uint8 arrays when present

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"recording length must be >= 1, got {self.length}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("recording dimensions must be positive")
        if self.frames is not None and len(self.frames) != self.length:
            raise ValueError(f"{len(self.frames)} images for length-{self.length} recording")
