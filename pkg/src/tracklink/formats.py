"""File formats: PGM recordings with a JSON manifest, NDJSON track files.

All formats are self-describing (format name + version in the header) and
reject unknown versions. Writes go through a temp file and an atomic rename
so interrupted runs never leave half-written outputs. Round trips are
byte-identical: record field order is fixed and masks serialize as their
canonical run-length triples.

Coordinate convention in every file: x = column, y = row, origin top-left;
runs are [row, start_col, length].
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .geometry import Mask
from .tracks import Detection, GlobalTrack, LocalTrack, Recording, TrackEntry

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"
FRAME_PATTERN = "frame_%04d.pgm"


class FormatError(ValueError):
    """Malformed or inconsistent file content; message carries file and line."""


def _atomic_write_bytes(path: Path, data: bytes):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def write_json(path, obj, indent: int = 2):
    _atomic_write_bytes(Path(path), (json.dumps(obj, indent=indent) + "\n").encode())


# ---------------------------------------------------------------- PGM frames


def write_pgm(path, image: np.ndarray):
    img = np.asarray(image)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise FormatError(f"{path}: PGM image must be a 2D uint8 array")
    height, width = img.shape
    header = f"P5\n{width} {height}\n255\n".encode()
    _atomic_write_bytes(Path(path), header + img.tobytes())


def read_pgm(path) -> np.ndarray:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read frame file: {exc}") from exc
    tokens = []
    pos = 0
    while len(tokens) < 4 and pos < len(raw):
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    pos += 1  # single whitespace after maxval
    if len(tokens) != 4 or tokens[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM (P5) file")
    try:
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise FormatError(f"{path}: bad PGM header") from exc
    if maxval != 255:
        raise FormatError(f"{path}: unsupported maxval {maxval}, expected 255")
    data = raw[pos:]
    if len(data) != width * height:
        raise FormatError(f"{path}: expected {width * height} pixel bytes, found {len(data)}")
    return np.frombuffer(data, dtype=np.uint8).reshape(height, width)


def write_recording(recording: Recording, out_dir, name: str = "recording"):
    if recording.frames is None:
        raise ValueError("recording has no frame images to write")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, img in enumerate(recording.frames):
        write_pgm(out_dir / (FRAME_PATTERN % i), img)
    manifest = {
        "format": "recording",
        "version": FORMAT_VERSION,
        "name": name,
        "width": recording.width,
        "height": recording.height,
        "frame_count": recording.length,
        "frame_pattern": FRAME_PATTERN,
    }
    _atomic_write_bytes(out_dir / MANIFEST_NAME, (json.dumps(manifest, indent=2) + "\n").encode())


def read_recording(in_dir) -> Recording:
    in_dir = Path(in_dir)
    manifest_path = in_dir / MANIFEST_NAME
    try:
        manifest = json.loads(manifest_path.read_text())
    except OSError as exc:
        raise FormatError(f"{manifest_path}: cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{manifest_path}: invalid JSON: {exc}") from exc
    _check_header(manifest, "recording", manifest_path)
    width, height = manifest["width"], manifest["height"]
    count = manifest["frame_count"]
    pattern = manifest["frame_pattern"]
    frames = []
    for i in range(count):
        frame_path = in_dir / (pattern % i)
        if not frame_path.exists():
            raise FormatError(f"{frame_path}: frame {i} missing "
                              f"(manifest says {count} frames)")
        img = read_pgm(frame_path)
        if img.shape != (height, width):
            raise FormatError(f"{frame_path}: frame is {img.shape[1]}x{img.shape[0]}, "
                              f"manifest says {width}x{height}")
        frames.append(img)
    return Recording(width, height, count, tuple(frames))


# ------------------------------------------------------------- NDJSON files


def _check_header(header: dict, expected_format: str, where):
    if header.get("format") != expected_format:
        raise FormatError(f"{where}: format is {header.get('format')!r}, expected {expected_format!r}")
    if header.get("version") != FORMAT_VERSION:
        raise FormatError(f"{where}: unsupported version {header.get('version')!r}")


def _runs_to_json(mask: Mask) -> list:
    return [list(run) for run in mask.runs]


def _mask_from_json(runs, width: int, height: int, where: str) -> Mask:
    try:
        return Mask(width, height, tuple((int(r), int(s), int(l)) for r, s, l in runs))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: bad mask runs: {exc}") from exc


def _read_ndjson(path, expected_format: str):
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read: {exc}") from exc
    if not lines:
        raise FormatError(f"{path}:1: missing header line")
    records = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append((lineno, json.loads(line)))
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    header = records[0][1]
    _check_header(header, expected_format, f"{path}:1")
    for key in ("width", "height", "frames"):
        if not isinstance(header.get(key), int) or header[key] <= 0:
            raise FormatError(f"{path}:1: header field {key!r} must be a positive integer")
    return path, header, records[1:]


def _header_line(fmt: str, width: int, height: int, frames: int) -> str:
    return _dumps({"format": fmt, "version": FORMAT_VERSION,
                   "width": width, "height": height, "frames": frames})


# detections


def write_detections(path, detections: list[Detection], width: int, height: int, frames: int):
    lines = [_header_line("detections", width, height, frames)]
    for det in detections:
        if det.mask.width != width or det.mask.height != height:
            raise ValueError(f"detection {det.detection_id} mask grid differs from header")
        lines.append(_dumps({"detection_id": det.detection_id, "frame": det.frame,
                             "runs": _runs_to_json(det.mask)}))
    _atomic_write_bytes(Path(path), ("\n".join(lines) + "\n").encode())


def read_detections(path) -> tuple[list[Detection], dict]:
    path, header, rows = _read_ndjson(path, "detections")
    width, height, frames = header["width"], header["height"], header["frames"]
    detections = []
    seen = set()
    for lineno, row in rows:
        where = f"{path}:{lineno}"
        try:
            det_id, frame, runs = row["detection_id"], row["frame"], row["runs"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"{where}: missing field {exc}") from exc
        if not (0 <= frame < frames):
            raise FormatError(f"{where}: frame {frame} outside [0, {frames})")
        if det_id in seen:
            raise FormatError(f"{where}: duplicate detection_id {det_id}")
        seen.add(det_id)
        mask = _mask_from_json(runs, width, height, where)
        try:
            detections.append(Detection(det_id, frame, mask))
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from exc
    return detections, header


# local tracks


def write_local_tracks(path, local_tracks: list[LocalTrack], width: int, height: int, frames: int):
    lines = [_header_line("local_tracks", width, height, frames)]
    for lt in local_tracks:
        window = [(_runs_to_json(m) if m.runs else None) for m in lt.window]
        lines.append(_dumps({"anchor_id": lt.anchor.detection_id, "anchor_frame": lt.anchor.frame,
                             "tr": lt.tr, "window": window}))
    _atomic_write_bytes(Path(path), ("\n".join(lines) + "\n").encode())


def read_local_tracks(path) -> tuple[list[LocalTrack], dict]:
    path, header, rows = _read_ndjson(path, "local_tracks")
    width, height, frames = header["width"], header["height"], header["frames"]
    tracks = []
    tr_seen = None
    seen_ids = set()
    for lineno, row in rows:
        where = f"{path}:{lineno}"
        try:
            anchor_id, anchor_frame = row["anchor_id"], row["anchor_frame"]
            tr, window_rows = row["tr"], row["window"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"{where}: missing field {exc}") from exc
        if tr_seen is None:
            tr_seen = tr
        elif tr != tr_seen:
            raise FormatError(f"{where}: tracking range {tr} differs from {tr_seen} seen earlier")
        if not (0 <= anchor_frame < frames):
            raise FormatError(f"{where}: anchor frame {anchor_frame} outside [0, {frames})")
        if anchor_id in seen_ids:
            raise FormatError(f"{where}: duplicate anchor_id {anchor_id}")
        seen_ids.add(anchor_id)
        if not isinstance(window_rows, list) or len(window_rows) != 2 * tr + 1:
            raise FormatError(f"{where}: window must hold {2 * tr + 1} entries")
        window = tuple(
            Mask.empty(width, height) if entry is None else _mask_from_json(entry, width, height, where)
            for entry in window_rows
        )
        try:
            anchor = Detection(anchor_id, anchor_frame, window[tr])
            tracks.append(LocalTrack(anchor, tr, window))
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from exc
    return tracks, header


# global tracks


def write_global_tracks(path, tracks: list[GlobalTrack], width: int, height: int, frames: int):
    lines = [_header_line("global_tracks", width, height, frames)]
    for track in tracks:
        track_frames = track.frames
        if track_frames != sorted(track_frames):
            raise ValueError(f"track {track.track_id}: frames not strictly increasing")
        entries = [{"frame": f, "provenance": e.provenance, "runs": _runs_to_json(e.mask)}
                   for f, e in track.entries.items()]
        lines.append(_dumps({"track_id": track.track_id, "entries": entries}))
    _atomic_write_bytes(Path(path), ("\n".join(lines) + "\n").encode())


def read_global_tracks(path) -> tuple[list[GlobalTrack], dict]:
    path, header, rows = _read_ndjson(path, "global_tracks")
    width, height, frames = header["width"], header["height"], header["frames"]
    tracks = []
    seen_ids = set()
    for lineno, row in rows:
        where = f"{path}:{lineno}"
        try:
            track_id, entry_rows = row["track_id"], row["entries"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"{where}: missing field {exc}") from exc
        if track_id in seen_ids:
            raise FormatError(f"{where}: duplicate track_id {track_id}")
        seen_ids.add(track_id)
        entries: dict[int, TrackEntry] = {}
        prev_frame = -1
        for entry in entry_rows:
            try:
                frame, provenance, runs = entry["frame"], entry["provenance"], entry["runs"]
            except (KeyError, TypeError) as exc:
                raise FormatError(f"{where}: entry missing field {exc}") from exc
            if not (0 <= frame < frames):
                raise FormatError(f"{where}: frame {frame} outside [0, {frames})")
            if frame <= prev_frame:
                raise FormatError(f"{where}: frames not strictly increasing at {frame}")
            prev_frame = frame
            mask = _mask_from_json(runs, width, height, where)
            try:
                entries[frame] = TrackEntry(mask, provenance)
            except ValueError as exc:
                raise FormatError(f"{where}: {exc}") from exc
        if not entries:
            raise FormatError(f"{where}: track {track_id} has no entries")
        tracks.append(GlobalTrack(track_id, entries))
    return tracks, header
