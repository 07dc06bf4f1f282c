"""Canonical JSON documents.

Serialization is canonical: sorted keys, compact separators, cells in
row-major order, and no timestamps, so identical inputs yield byte-identical
output. Documents carry the tool version and a digest of their input.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterable, Sequence

from . import __version__
from .core import Region, Video
from .errors import NeverPresent
from .temporal import PersistenceInterval, SegmentationMask, TrackedRegion

TOOL_NAME = "tdtopo"


def canonical_json(document: dict) -> str:
    """Canonical text form: sorted keys, compact separators, trailing newline."""
    return json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def video_digest(video: Video) -> str:
    """Digest over dimensions, fps, and raw frame bytes."""
    h = hashlib.sha256()
    w, hh = video.extent
    h.update(f"{w}x{hh}@{video.fps!r}/{len(video)}".encode("ascii"))
    for frame in video:
        h.update(frame.levels.tobytes())
    return h.hexdigest()


def base_document(kind: str, input_digest: str) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "kind": kind,
        "input_digest": input_digest,
    }


def cells_payload(cells: Iterable[tuple[int, int]]) -> list[list[int]]:
    return [[x, y] for x, y in sorted(cells, key=lambda c: (c[1], c[0]))]


def track_payload(track: TrackedRegion) -> dict:
    try:
        birth, death = track.birth, track.death
    except NeverPresent:
        birth = death = None
    return {
        "id": track.id,
        "birth": birth,
        "death": death,
        "slices": {
            str(t): cells_payload(s.cells)
            for t, s in enumerate(track.slices) if s.cells
        },
    }


def tracks_document(tracks: Sequence[TrackedRegion], n_frames: int,
                    extent: tuple[int, int], fps: float, input_digest: str) -> dict:
    doc = base_document("tracks", input_digest)
    doc.update({
        "frames": n_frames,
        "fps": fps,
        "extent": [extent[0], extent[1]],
        "tracks": [track_payload(t) for t in tracks],
    })
    return doc


def parse_tracks(doc: dict) -> tuple[list[TrackedRegion], int, tuple[int, int], float]:
    """Rebuild tracked regions from a tracks document."""
    n_frames = int(doc["frames"])
    extent = (int(doc["extent"][0]), int(doc["extent"][1]))
    fps = float(doc["fps"])
    tracks = []
    for entry in doc["tracks"]:
        per_t = {int(t): {(int(x), int(y)) for x, y in cells}
                 for t, cells in entry["slices"].items()}
        slices = tuple(Region(per_t.get(t, set()), extent) for t in range(n_frames))
        tracks.append(TrackedRegion(int(entry["id"]), slices))
    return tracks, n_frames, extent, fps


def masks_document(masks: Sequence[SegmentationMask], n_frames: int,
                   extent: tuple[int, int], fps: float, tol: int, scheme: str,
                   input_digest: str) -> dict:
    doc = base_document("masks", input_digest)
    doc.update({
        "frames": n_frames,
        "fps": fps,
        "extent": [extent[0], extent[1]],
        "tol": tol,
        "scheme": scheme,
        "masks": {str(m.t): {"foreground": cells_payload(m.foreground.cells)}
                  for m in masks},
    })
    return doc


def interval_payload(interval: PersistenceInterval) -> dict:
    return {
        "track": interval.track_id,
        "bin": interval.bin,
        "birth": interval.birth,
        "death": interval.death,
        "birth_s": interval.birth_seconds,
        "death_s": interval.death_seconds,
    }


def intervals_document(intervals: Sequence[PersistenceInterval], fps: float,
                       input_digest: str) -> dict:
    doc = base_document("intervals", input_digest)
    doc.update({
        "fps": fps,
        "intervals": [interval_payload(i) for i in intervals],
    })
    return doc


def parse_intervals(doc: dict) -> list[PersistenceInterval]:
    return [
        PersistenceInterval(int(e["track"]), str(e["bin"]), int(e["birth"]),
                            int(e["death"]), float(e["birth_s"]), float(e["death_s"]))
        for e in doc["intervals"]
    ]


def relations_document(relations: Sequence[dict], input_digest: str) -> dict:
    doc = base_document("relations", input_digest)
    doc["relations"] = list(relations)
    return doc


def region_payload(region: Region) -> list[list[int]]:
    return cells_payload(region.cells)
