"""Deterministic track linking, gap interpolation, evaluation and simulation."""

from .evaluate import EvalReport, Link, Tally, evaluate, extract_links, filter_border_tracks, \
    match_frame, segmentation_f, tracking_f
from .geometry import Centroid, Mask, area, bounding_box, centroid, euclidean_similarity, iou, \
    rle_decode, rle_encode, shift
from .interpolate import GapSpec, fill_all_gaps, interpolate_frame
from .linker import Chain, LinkerConfig, SimilarityMatrix, build_matrix, hungarian, link_pass, \
    link_recording, overlap_similarity
from .oracle import PerturbConfig, detections_from_gt, disrupted_tracks, ingest_local_tracks, \
    local_tracks_from_gt
from .sim import SimConfig, simulate
from .tracks import Detection, GlobalTrack, LocalTrack, Recording, TrackEntry, overlap, \
    window_frames

__version__ = "0.1.0"
