"""Segmentation and tracking F-scores against ground truth.

Segmentation matches instances frame by frame with an optimal one-to-one
IOU matching gated at iou_min. Tracking scores links: pairs of consecutive
occurrences of one id. A predicted link is a true positive iff both of its
endpoint masks are frame-matched to the endpoints of one ground-truth link.
For un-interpolated tracks links span gaps, which is what makes disrupted
baselines comparable to re-tracked results.
"""

from __future__ import annotations

from dataclasses import dataclass

from .assignment import solve_similarity_assignment
from .geometry import Mask, bounding_box, iou
from .tracks import GlobalTrack, Recording


@dataclass(frozen=True)
class Link:
    """Two consecutive occurrences of one track id."""

    track_id: int
    frame_a: int
    frame_b: int
    mask_a: Mask
    mask_b: Mask

    def __post_init__(self):
        if self.frame_a >= self.frame_b:
            raise ValueError(f"link frames must increase, got {self.frame_a} -> {self.frame_b}")


@dataclass(frozen=True)
class Tally:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def as_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn,
                "precision": self.precision, "recall": self.recall, "f": self.f}


@dataclass(frozen=True)
class EvalReport:
    seg: Tally
    trk: Tally

    def as_dict(self) -> dict:
        return {"seg": self.seg.as_dict(), "trk": self.trk.as_dict()}


def match_frame(pred_masks: list[Mask], gt_masks: list[Mask], iou_min: float = 0.5) -> list[tuple[int, int]]:
    """Optimal one-to-one matching of one frame's instances, gated at iou_min.

    Returns (pred_index, gt_index) pairs; matched pairs are TPs, unmatched
    predictions FPs, unmatched ground truths FNs.
    """
    if not pred_masks or not gt_masks:
        return []
    values = [[iou(p, g) for g in gt_masks] for p in pred_masks]
    feasible = [[v >= iou_min for v in row] for row in values]
    return solve_similarity_assignment(values, feasible)


def _instances_by_frame(tracks: list[GlobalTrack]) -> dict[int, list[tuple[int, Mask]]]:
    by_frame: dict[int, list[tuple[int, Mask]]] = {}
    for t in tracks:
        for frame, entry in t.entries.items():
            by_frame.setdefault(frame, []).append((t.track_id, entry.mask))
    return {f: by_frame[f] for f in sorted(by_frame)}


def _frame_matches(pred_tracks, gt_tracks, iou_min):
    """Per-frame pred-id -> gt-id matching plus per-frame instance counts."""
    pred_by_frame = _instances_by_frame(pred_tracks)
    gt_by_frame = _instances_by_frame(gt_tracks)
    matches: dict[int, dict[int, int]] = {}
    counts = []
    for frame in sorted(set(pred_by_frame) | set(gt_by_frame)):
        preds = pred_by_frame.get(frame, [])
        gts = gt_by_frame.get(frame, [])
        pairs = match_frame([m for _, m in preds], [m for _, m in gts], iou_min)
        matches[frame] = {preds[i][0]: gts[j][0] for i, j in pairs}
        counts.append((len(pairs), len(preds) - len(pairs), len(gts) - len(pairs)))
    return matches, counts


def segmentation_f(pred_tracks: list[GlobalTrack], gt_tracks: list[GlobalTrack],
                   iou_min: float = 0.5) -> Tally:
    """Frame-matching tallies summed over all frames.

    Interpolated entries count as predictions: restored instances are part
    of the segmentation output.
    """
    _, counts = _frame_matches(pred_tracks, gt_tracks, iou_min)
    return Tally(sum(c[0] for c in counts), sum(c[1] for c in counts), sum(c[2] for c in counts))


def extract_links(tracks: list[GlobalTrack]) -> list[Link]:
    """One link per adjacent occurrence pair of each id."""
    links = []
    for t in tracks:
        for fa, fb in t.occurrence_pairs():
            links.append(Link(t.track_id, fa, fb, t.entries[fa].mask, t.entries[fb].mask))
    return links


def tracking_f(pred_tracks: list[GlobalTrack], gt_tracks: list[GlobalTrack],
               iou_min: float = 0.5) -> Tally:
    """Link tallies: a predicted link is TP iff both endpoints frame-match one gt link."""
    matches, _ = _frame_matches(pred_tracks, gt_tracks, iou_min)
    gt_links = {(l.track_id, l.frame_a, l.frame_b) for l in extract_links(gt_tracks)}
    pred_links = extract_links(pred_tracks)
    tp = 0
    for link in pred_links:
        g_a = matches.get(link.frame_a, {}).get(link.track_id)
        g_b = matches.get(link.frame_b, {}).get(link.track_id)
        if g_a is not None and g_a == g_b and (g_a, link.frame_a, link.frame_b) in gt_links:
            tp += 1
    return Tally(tp, len(pred_links) - tp, len(gt_links) - tp)


def evaluate(pred_tracks: list[GlobalTrack], gt_tracks: list[GlobalTrack],
             iou_min: float = 0.5) -> EvalReport:
    return EvalReport(segmentation_f(pred_tracks, gt_tracks, iou_min),
                      tracking_f(pred_tracks, gt_tracks, iou_min))


def _touches_band(mask: Mask, width: int, height: int, margin: int) -> bool:
    box = bounding_box(mask)
    if box is None:
        return False
    min_x, min_y, max_x, max_y = box
    return min_x < margin or min_y < margin or max_x >= width - margin or max_y >= height - margin


def filter_border_tracks(tracks: list[GlobalTrack], recording: Recording,
                         margin_px: int = 2) -> list[GlobalTrack]:
    """Drop tracks that leave the field of view.

    A track is removed iff it ends before the recording does and its final
    mask touches the margin band; touching the border mid-life while
    persisting to the end keeps the track.
    """
    if margin_px < 0:
        raise ValueError(f"margin must be >= 0, got {margin_px}")
    kept = []
    for t in tracks:
        exits = (t.last_frame < recording.length - 1
                 and _touches_band(t.entries[t.last_frame].mask, recording.width,
                                   recording.height, margin_px))
        if not exits:
            kept.append(t)
    return kept
