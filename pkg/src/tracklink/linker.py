"""Link local tracks into global identity tracks.

Matching runs hierarchically: first all frame-to-frame (delta_t=1) passes in
increasing t, then delta_t=2..max_skip over whatever the earlier passes left
unmatched. Each pass gates pairwise window-overlap similarities at the
configured threshold and solves an optimal one-to-one assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import solve_similarity_assignment
from .geometry import Mask, euclidean_similarity, iou
from .tracks import DETECTED, GlobalTrack, LocalTrack, TrackEntry, overlap

METRIC_MEAN_IOU = "mean_iou"
METRIC_EUCLIDEAN = "euclidean"
_METRIC_ALIASES = {"iou": METRIC_MEAN_IOU, METRIC_MEAN_IOU: METRIC_MEAN_IOU, METRIC_EUCLIDEAN: METRIC_EUCLIDEAN}


@dataclass(frozen=True)
class LinkerConfig:
    tr: int
    max_skip: int | None = None  # None -> tr, the soundest default; up to 2*tr allowed
    threshold: float = 0.05
    metric: str = METRIC_MEAN_IOU
    d_max: float = 50.0

    def __post_init__(self):
        if self.tr < 1:
            raise ValueError(f"tracking range must be >= 1, got {self.tr}")
        skip = self.effective_max_skip
        if not (1 <= skip <= 2 * self.tr):
            raise ValueError(f"max_skip must be in [1, {2 * self.tr}], got {skip}")
        if not (0.0 <= self.threshold <= 1.0):
            raise ValueError(f"threshold must be in [0,1], got {self.threshold}")
        if self.metric not in _METRIC_ALIASES:
            raise ValueError(f"unknown metric {self.metric!r}")
        object.__setattr__(self, "metric", _METRIC_ALIASES[self.metric])

    @property
    def effective_max_skip(self) -> int:
        return self.tr if self.max_skip is None else self.max_skip


@dataclass
class SimilarityMatrix:
    """Pairwise similarities between row and column candidates at one delta_t.

    Gated entries are flagged infeasible rather than zeroed, so a legitimate
    zero similarity stays distinguishable from a gated one.
    """

    values: np.ndarray  # N x M float in [0,1]
    feasible: np.ndarray  # N x M bool
    delta_t: int
    rows: list = field(default_factory=list)  # row candidate payloads
    cols: list = field(default_factory=list)


def overlap_similarity(lt_a: LocalTrack, lt_b: LocalTrack, metric: str = METRIC_MEAN_IOU,
                       d_max: float = 50.0) -> float:
    """Mean per-frame similarity over the two windows' shared frames."""
    metric = _METRIC_ALIASES[metric]
    pairs = overlap(lt_a, lt_b)
    if metric == METRIC_MEAN_IOU:
        vals = [iou(a, b) for a, b in pairs]
    else:
        vals = [euclidean_similarity(a, b, d_max) for a, b in pairs]
    return sum(vals) / len(vals)


def build_matrix(tracks_at_t: list[LocalTrack], tracks_at_t_plus_dt: list[LocalTrack],
                 config: LinkerConfig) -> SimilarityMatrix:
    """Complete N x M similarity matrix with sub-threshold entries gated."""
    n, m = len(tracks_at_t), len(tracks_at_t_plus_dt)
    values = np.zeros((n, m), dtype=np.float64)
    for i, lt_a in enumerate(tracks_at_t):
        for j, lt_b in enumerate(tracks_at_t_plus_dt):
            values[i, j] = overlap_similarity(lt_a, lt_b, config.metric, config.d_max)
    feasible = values >= config.threshold
    delta_t = 0
    if n and m:
        delta_t = tracks_at_t_plus_dt[0].anchor.frame - tracks_at_t[0].anchor.frame
    return SimilarityMatrix(values, feasible, delta_t, list(tracks_at_t), list(tracks_at_t_plus_dt))


def hungarian(matrix: SimilarityMatrix) -> list[tuple[int, int]]:
    """Optimal one-to-one partial assignment over feasible, positive entries.

    Maximizes total similarity exactly (lossless integer arithmetic); among
    equal-total optima returns the lexicographically smallest row-major pair
    list. Zero-similarity entries are never assigned, so even threshold=0
    cannot produce no-evidence matches.
    """
    return solve_similarity_assignment(matrix.values.tolist(), matrix.feasible.tolist())


@dataclass
class Chain:
    """A partial identity: local tracks chained in increasing anchor frame."""

    items: list[LocalTrack]

    @property
    def first(self) -> LocalTrack:
        return self.items[0]

    @property
    def last(self) -> LocalTrack:
        return self.items[-1]


def link_pass(chains: list[Chain], delta_t: int, config: LinkerConfig) -> list[Chain]:
    """One hierarchical pass: match chain ends at t to chain starts at t+delta_t.

    Sweeps t in increasing order; chains merged earlier in the pass become
    candidates again at their new end frame. Returns the updated chain list.
    """
    if delta_t < 1:
        raise ValueError(f"delta_t must be >= 1, got {delta_t}")
    chains = list(chains)
    frames = sorted({c.last.anchor.frame for c in chains})
    for t in frames:
        rows = sorted((c for c in chains if c.last.anchor.frame == t),
                      key=lambda c: c.last.anchor.detection_id)
        cols = sorted((c for c in chains if c.first.anchor.frame == t + delta_t),
                      key=lambda c: c.first.anchor.detection_id)
        if not rows or not cols:
            continue
        matrix = build_matrix([c.last for c in rows], [c.first for c in cols], config)
        for i, j in hungarian(matrix):
            merged = Chain(rows[i].items + cols[j].items)
            chains.remove(rows[i])
            chains.remove(cols[j])
            chains.append(merged)
    return chains


def link_recording(local_tracks: list[LocalTrack], config: LinkerConfig) -> list[GlobalTrack]:
    """Run the full hierarchical schedule and emit global tracks.

    Track ids are assigned by (first frame, first detection id) order, so
    identical inputs produce identical outputs.
    """
    if any(lt.tr != config.tr for lt in local_tracks):
        trs = sorted({lt.tr for lt in local_tracks})
        raise ValueError(f"local tracks must all have tr={config.tr}, found {trs}")
    seen_ids = [lt.anchor.detection_id for lt in local_tracks]
    if len(set(seen_ids)) != len(seen_ids):
        raise ValueError("duplicate detection ids in local tracks")

    ordered = sorted(local_tracks, key=lambda lt: (lt.anchor.frame, lt.anchor.detection_id))
    chains = [Chain([lt]) for lt in ordered]
    for delta_t in range(1, config.effective_max_skip + 1):
        chains = link_pass(chains, delta_t, config)

    used: set[int] = set()
    for chain in chains:
        for lt in chain.items:
            if lt.anchor.detection_id in used:
                raise AssertionError("detection assigned to two tracks")
            used.add(lt.anchor.detection_id)

    chains.sort(key=lambda c: (c.first.anchor.frame, c.first.anchor.detection_id))
    out = []
    for track_id, chain in enumerate(chains):
        entries = {
            lt.anchor.frame: TrackEntry(lt.anchor.mask, DETECTED, lt.anchor.detection_id)
            for lt in chain.items
        }
        out.append(GlobalTrack(track_id, entries))
    return out
