"""Ground-truth-driven detections and local tracks with configurable flaws.

The oracle stands in for the neural models: detections are ground-truth
instances (optionally dropped out), and each surviving detection gets a
prediction window filled with its own object's ground-truth masks at the
neighboring frames. Imperfection knobs (missing window entries, centroid
jitter, boundary erosion/dilation) emulate an unreliable predictor; dropout
removes anchors only and never alters surviving windows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Mask, area, rle_decode, rle_encode, shift
from .tracks import Detection, GlobalTrack, LocalTrack

DROPOUT_NONE = "none"
DROPOUT_UNIFORM = "uniform"
DROPOUT_BOX = "box"


@dataclass(frozen=True)
class PerturbConfig:
    dropout_kind: str = DROPOUT_NONE
    dropout_rate: float = 0.0
    block_len: int = 7
    window_miss_p: float = 0.0
    miss_offsets: frozenset | None = None  # None: every non-anchor offset can be missed
    jitter_px: int = 0
    boundary_erode_dilate: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.dropout_kind not in (DROPOUT_NONE, DROPOUT_UNIFORM, DROPOUT_BOX):
            raise ValueError(f"unknown dropout kind {self.dropout_kind!r}")
        if not (0.0 <= self.dropout_rate <= 1.0) or not (0.0 <= self.window_miss_p <= 1.0):
            raise ValueError("probabilities must be in [0,1]")
        if self.block_len < 1:
            raise ValueError(f"block_len must be >= 1, got {self.block_len}")
        if self.jitter_px < 0 or self.boundary_erode_dilate < 0:
            raise ValueError("jitter_px and boundary_erode_dilate must be >= 0")


def _rng(*entropy) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _box_removed(frames: list[int], p: float, block_len: int, rng) -> set[int]:
    """Blocks via sequential scan; a mandatory survivor after each block keeps
    maximal removed runs at block_len."""
    removed: set[int] = set()
    i = 0
    while i < len(frames):
        if rng.random() < p:
            removed.update(frames[i : i + block_len])
            i += block_len + 1
        else:
            i += 1
    return removed


def detections_from_gt(gt_tracks: list[GlobalTrack], perturb: PerturbConfig) -> list[Detection]:
    """Ground-truth instances minus the configured dropout, ids in (frame, track) order."""
    instances = []  # (frame, track_id, mask), stable order
    for track in sorted(gt_tracks, key=lambda t: t.track_id):
        for frame, entry in track.entries.items():
            instances.append((frame, track.track_id, entry.mask))
    instances.sort(key=lambda inst: (inst[0], inst[1]))

    if perturb.dropout_kind == DROPOUT_NONE or perturb.dropout_rate == 0.0:
        keep = instances
    elif perturb.dropout_kind == DROPOUT_UNIFORM:
        rng = _rng(perturb.seed, 0)
        keep = [inst for inst in instances if rng.random() >= perturb.dropout_rate]
    else:
        keep = _box_dropout(gt_tracks, instances, perturb)

    return [Detection(i, frame, mask) for i, (frame, _tid, mask) in enumerate(keep)]


def _box_dropout(gt_tracks, instances, perturb: PerturbConfig):
    # activation probability making the expected removed fraction equal the
    # rate: fraction = p*L / (1 + p*L) per scan cycle => p = rate/(L*(1-rate))
    rate = perturb.dropout_rate
    if rate >= 1.0:
        raise ValueError("box dropout rate must be < 1")
    p = rate / (perturb.block_len * (1.0 - rate))
    total = len(instances)
    for attempt in range(200):
        rng = _rng(perturb.seed, 0, attempt)
        removed: set[tuple[int, int]] = set()
        for track in sorted(gt_tracks, key=lambda t: t.track_id):
            frames = track.frames
            for f in _box_removed(frames, p, perturb.block_len, rng):
                removed.add((f, track.track_id))
        fraction = len(removed) / total if total else 0.0
        if abs(fraction - rate) <= 0.1 * rate:
            return [inst for inst in instances if (inst[0], inst[1]) not in removed]
    raise RuntimeError(f"box dropout could not hit {rate:.3f} +-10% in 200 attempts")


def _morph(mask: Mask, steps: int) -> Mask:
    """Uniform 4-neighborhood dilation (steps > 0) or erosion (steps < 0)."""
    if steps == 0 or area(mask) == 0:
        return mask
    bm = rle_decode(mask)
    for _ in range(abs(steps)):
        up = np.zeros_like(bm)
        down = np.zeros_like(bm)
        left = np.zeros_like(bm)
        right = np.zeros_like(bm)
        up[:-1] = bm[1:]
        down[1:] = bm[:-1]
        left[:, :-1] = bm[:, 1:]
        right[:, 1:] = bm[:, :-1]
        if steps > 0:
            bm = bm | up | down | left | right
        else:
            bm = bm & up & down & left & right
    return rle_encode(bm)


def _find_gt_track(det: Detection, gt_tracks: list[GlobalTrack]) -> GlobalTrack:
    for track in sorted(gt_tracks, key=lambda t: t.track_id):
        entry = track.entries.get(det.frame)
        if entry is not None and entry.mask.runs == det.mask.runs:
            return track
    raise ValueError(f"detection {det.detection_id} (frame {det.frame}) is not on any gt track")


def local_tracks_from_gt(detections: list[Detection], gt_tracks: list[GlobalTrack], tr: int,
                         perturb: PerturbConfig, recording_length: int) -> list[LocalTrack]:
    """Ideal prediction windows from ground truth, degraded per the config.

    Window entry at offset k holds the same object's gt mask at the clamped
    frame (recording-boundary padding mirrors the first/last frame). The
    anchor entry is never missed or perturbed.
    """
    out = []
    for det in sorted(detections, key=lambda d: d.detection_id):
        track = _find_gt_track(det, gt_tracks)
        rng = _rng(perturb.seed, 1, det.detection_id)
        window = []
        for offset in range(-tr, tr + 1):
            if offset == 0:
                window.append(det.mask)
                continue
            frame = min(max(det.frame + offset, 0), recording_length - 1)
            entry = track.entries.get(frame)
            mask = entry.mask if entry is not None else Mask.empty(det.mask.width, det.mask.height)
            if perturb.window_miss_p > 0.0 and (
                perturb.miss_offsets is None or offset in perturb.miss_offsets
            ):
                if rng.random() < perturb.window_miss_p:
                    window.append(Mask.empty(det.mask.width, det.mask.height))
                    continue
            if perturb.jitter_px > 0:
                dx, dy = rng.integers(-perturb.jitter_px, perturb.jitter_px + 1, 2)
                mask = shift(mask, int(dx), int(dy))
            if perturb.boundary_erode_dilate > 0:
                steps = int(rng.integers(-perturb.boundary_erode_dilate,
                                         perturb.boundary_erode_dilate + 1))
                mask = _morph(mask, steps)
            window.append(mask)
        out.append(LocalTrack(det, tr, tuple(window)))
    return out


def disrupted_tracks(gt_tracks: list[GlobalTrack], detections: list[Detection]) -> list[GlobalTrack]:
    """Ground-truth tracks restricted to surviving detections: the noisy baseline.

    Ids are kept, so gaps remain inside the tracks and their links span them.
    """
    surviving: set[tuple[int, tuple]] = {(d.frame, d.mask.runs) for d in detections}
    out = []
    for track in sorted(gt_tracks, key=lambda t: t.track_id):
        entries = {f: e for f, e in track.entries.items() if (f, e.mask.runs) in surviving}
        if entries:
            out.append(GlobalTrack(track.track_id, entries))
    return out


def ingest_local_tracks(path) -> list[LocalTrack]:
    """Read and validate a local-track file (see formats)."""
    from .formats import read_local_tracks

    tracks, _meta = read_local_tracks(path)
    return tracks
