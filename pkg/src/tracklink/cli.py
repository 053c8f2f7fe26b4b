"""Command-line pipeline: simulate, oracle, link, evaluate, ablate.

Every command that takes --seed is reproducible byte-for-byte; outputs are
written atomically. evaluate and ablate print their JSON report to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import formats
from .evaluate import evaluate, filter_border_tracks
from .interpolate import fill_all_gaps
from .linker import METRIC_EUCLIDEAN, METRIC_MEAN_IOU, LinkerConfig, link_recording
from .oracle import (
    DROPOUT_BOX,
    DROPOUT_NONE,
    DROPOUT_UNIFORM,
    PerturbConfig,
    detections_from_gt,
    disrupted_tracks,
    local_tracks_from_gt,
)
from .sim import KINDS, SimConfig, simulate
from .tracks import Recording

GT_TRACKS_NAME = "gt_tracks.ndjson"


def _parse_dropout(spec: str) -> tuple[str, float, int]:
    parts = spec.split(":")
    if parts[0] == DROPOUT_NONE and len(parts) == 1:
        return DROPOUT_NONE, 0.0, 7
    try:
        if parts[0] == DROPOUT_UNIFORM and len(parts) == 2:
            return DROPOUT_UNIFORM, float(parts[1]), 7
        if parts[0] == DROPOUT_BOX and len(parts) in (2, 3):
            block = int(parts[2]) if len(parts) == 3 else 7
            return DROPOUT_BOX, float(parts[1]), block
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(
        f"bad dropout spec {spec!r}, expected none, uniform:R or box:R:L")


def _combo_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(parts).generate_state(1)[0])


def _cmd_simulate(args) -> int:
    config = SimConfig(kind=args.kind, n_objects=args.objects, width=args.width,
                       height=args.height, frames=args.frames, seed=args.seed)
    recording, gt_tracks = simulate(config)
    out = Path(args.out)
    formats.write_recording(recording, out, name=out.name)
    formats.write_global_tracks(out / GT_TRACKS_NAME, gt_tracks, recording.width,
                                recording.height, recording.length)
    return 0


def _cmd_oracle(args) -> int:
    gt_tracks, meta = formats.read_global_tracks(args.gt)
    kind, rate, block = args.dropout
    perturb = PerturbConfig(dropout_kind=kind, dropout_rate=rate, block_len=block,
                            window_miss_p=args.miss_p, jitter_px=args.jitter,
                            boundary_erode_dilate=args.erode_dilate, seed=args.seed)
    detections = detections_from_gt(gt_tracks, perturb)
    local_tracks = local_tracks_from_gt(detections, gt_tracks, args.tr, perturb, meta["frames"])
    baseline = disrupted_tracks(gt_tracks, detections)
    out = Path(args.out)
    formats.write_detections(out / "detections.ndjson", detections,
                             meta["width"], meta["height"], meta["frames"])
    formats.write_local_tracks(out / "local_tracks.ndjson", local_tracks,
                               meta["width"], meta["height"], meta["frames"])
    formats.write_global_tracks(out / "disrupted_tracks.ndjson", baseline,
                                meta["width"], meta["height"], meta["frames"])
    return 0


def _link(local_tracks, meta, tr, threshold, metric, d_max, max_skip, interpolate,
          border_filter, border_margin):
    config = LinkerConfig(tr=tr, max_skip=max_skip, threshold=threshold,
                          metric=metric, d_max=d_max)
    tracks = link_recording(local_tracks, config)
    if interpolate:
        tracks = [fill_all_gaps(t) for t in tracks]
    if border_filter:
        recording = Recording(meta["width"], meta["height"], meta["frames"])
        tracks = filter_border_tracks(tracks, recording, border_margin)
    return tracks


def _cmd_link(args) -> int:
    local_tracks, meta = formats.read_local_tracks(args.local_tracks)
    if local_tracks and local_tracks[0].tr != args.tr:
        raise ValueError(f"--tr {args.tr} does not match file tracking range {local_tracks[0].tr}")
    tracks = _link(local_tracks, meta, args.tr, args.threshold, args.metric, args.d_max,
                   args.max_skip, args.interpolate == "on", args.border_filter == "drop",
                   args.border_margin)
    formats.write_global_tracks(args.out, tracks, meta["width"], meta["height"], meta["frames"])
    return 0


def _cmd_evaluate(args) -> int:
    pred, pred_meta = formats.read_global_tracks(args.pred)
    gt, gt_meta = formats.read_global_tracks(args.gt)
    for key in ("width", "height"):
        if pred_meta[key] != gt_meta[key]:
            raise ValueError(f"prediction and ground truth {key} differ: "
                             f"{pred_meta[key]} vs {gt_meta[key]}")
    report = evaluate(pred, gt, args.iou_min)
    payload = {"format": "eval_report", "version": formats.FORMAT_VERSION, **report.as_dict()}
    print(json.dumps(payload, indent=2))
    if args.out:
        formats.write_json(args.out, payload)
    return 0


def _cmd_ablate(args) -> int:
    gt_tracks, meta = formats.read_global_tracks(args.gt)
    rows = []
    for d_idx, (kind, rate, block) in enumerate(args.dropout):
        for t_idx, tr in enumerate(args.tr):
            perturb = PerturbConfig(dropout_kind=kind, dropout_rate=rate, block_len=block,
                                    window_miss_p=args.miss_p, jitter_px=args.jitter,
                                    seed=_combo_seed(args.seed, d_idx, t_idx))
            detections = detections_from_gt(gt_tracks, perturb)
            local_tracks = local_tracks_from_gt(detections, gt_tracks, tr, perturb, meta["frames"])
            baseline = disrupted_tracks(gt_tracks, detections)
            max_skip = {"tr": tr, "2tr": 2 * tr}.get(args.max_skip) or int(args.max_skip)
            retracked = _link(local_tracks, meta, tr, args.threshold, args.metric, args.d_max,
                              max_skip, True, False, 0)
            rows.append({
                "dropout": f"{kind}:{rate}:{block}" if kind != DROPOUT_NONE else kind,
                "tr": tr,
                "max_skip": max_skip,
                "baseline": evaluate(baseline, gt_tracks, args.iou_min).as_dict(),
                "retracked": evaluate(retracked, gt_tracks, args.iou_min).as_dict(),
            })
    payload = {
        "format": "ablation_results",
        "version": formats.FORMAT_VERSION,
        "config": {"threshold": args.threshold, "metric": args.metric, "d_max": args.d_max,
                   "max_skip": args.max_skip, "miss_p": args.miss_p, "jitter": args.jitter,
                   "iou_min": args.iou_min, "seed": args.seed},
        "rows": rows,
    }
    print(json.dumps(payload, indent=2))
    if args.out:
        formats.write_json(args.out, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tracklink",
                                     description="Track linking, interpolation, evaluation "
                                                 "and synthetic benchmark generation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic recording with ground truth")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--objects", type=int, default=8)
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int, default=512)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("oracle", help="derive detections and local tracks from ground truth")
    p.add_argument("--gt", required=True, help="ground-truth global-tracks file")
    p.add_argument("--tr", type=int, required=True, help="tracking range")
    p.add_argument("--dropout", type=_parse_dropout, default=(DROPOUT_NONE, 0.0, 7),
                   help="none, uniform:R or box:R:L")
    p.add_argument("--miss-p", type=float, default=0.0,
                   help="probability a non-anchor window entry is emitted empty")
    p.add_argument("--jitter", type=int, default=0, help="max per-axis window jitter in px")
    p.add_argument("--erode-dilate", type=int, default=0,
                   help="max +-px of window boundary erosion/dilation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("link", help="link local tracks into global tracks")
    p.add_argument("--local-tracks", required=True)
    p.add_argument("--tr", type=int, required=True)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--metric", choices=["iou", "euclidean"], default="iou")
    p.add_argument("--d-max", type=float, default=50.0)
    p.add_argument("--max-skip", type=int, default=None, help="maximal matching distance, default tr")
    p.add_argument("--interpolate", choices=["on", "off"], default="on")
    p.add_argument("--border-filter", choices=["keep", "drop"], default="keep")
    p.add_argument("--border-margin", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_link)

    p = sub.add_parser("evaluate", help="segmentation and tracking F-scores")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--iou-min", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("ablate", help="dropout -> link -> evaluate sweep")
    p.add_argument("--gt", required=True)
    p.add_argument("--tr", type=int, nargs="+", required=True)
    p.add_argument("--dropout", type=_parse_dropout, nargs="+", required=True)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--metric", choices=["iou", "euclidean"], default="iou")
    p.add_argument("--d-max", type=float, default=50.0)
    p.add_argument("--max-skip", default="tr", help="'tr', '2tr' or an integer")
    p.add_argument("--miss-p", type=float, default=0.0)
    p.add_argument("--jitter", type=int, default=0)
    p.add_argument("--iou-min", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_ablate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"tracklink {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
