"""Cross-frame adjacency, segmentation, tracking, temporal proximities, and
persistence intervals.

A tracked region is a per-frame family of slices; its lifespan is the
(birth, death) pair of first and last frame indices where the slice is
nonempty. The gap distance underlying metric proximity is the minimum
Chebyshev distance over cell pairs, which is 0 exactly when the regions
share a cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import Cell, Extent, Frame, Region, Video, chebyshev, value_at
from .errors import (
    EmptySubimage,
    LastFrame,
    NeverPresent,
    NotFullSpan,
    OutOfExtent,
    OverlappingBins,
    PartialMap,
)
from .topology import (
    AdjacencyScheme,
    ContinuityVerdict,
    connected_components,
    is_connected,
    subimages_adjacent,
)


@dataclass(frozen=True)
class TrackedRegion:
    """A time-indexed family of region slices, one per frame index.

    Slices may be empty where the object is absent; birth and death are the
    first and last indices with a nonempty slice.
    """

    id: int
    slices: tuple[Region, ...]

    def __init__(self, id: int, slices: Iterable[Region]):
        slices = tuple(slices)
        if not slices:
            raise ValueError("a tracked region needs at least one frame slot")
        extent = slices[0].extent
        for s in slices:
            if s.extent != extent:
                raise ValueError("all slices of one track must share an extent")
        object.__setattr__(self, "id", int(id))
        object.__setattr__(self, "slices", slices)

    @property
    def extent(self) -> Extent:
        return self.slices[0].extent

    def present_times(self) -> list[int]:
        return [t for t, s in enumerate(self.slices) if s.cells]

    @property
    def birth(self) -> int:
        for t, s in enumerate(self.slices):
            if s.cells:
                return t
        raise NeverPresent(f"track {self.id} has no nonempty slice")

    @property
    def death(self) -> int:
        for t in range(len(self.slices) - 1, -1, -1):
            if self.slices[t].cells:
                return t
        raise NeverPresent(f"track {self.id} has no nonempty slice")

    def __repr__(self) -> str:
        alive = self.present_times()
        span = f"[{alive[0]}, {alive[-1]}]" if alive else "never"
        return f"TrackedRegion(id={self.id}, {len(self.slices)} frames, alive {span})"


class SegmentationMask:
    """Foreground/background split of one frame against its successor.

    The background is derived lazily as the foreground's complement; the two
    always partition the full frame extent (edge cells, where a forward
    difference is undefined, count as background by convention).
    """

    __slots__ = ("t", "foreground", "_background")

    def __init__(self, t: int, foreground: Region):
        self.t = int(t)
        self.foreground = foreground
        self._background = None

    @property
    def background(self) -> Region:
        if self._background is None:
            w, h = self.foreground.extent
            rest = {(x, y) for x in range(w) for y in range(h)} - self.foreground.cells
            self._background = Region(rest, (w, h))
        return self._background

    def __repr__(self) -> str:
        return f"SegmentationMask(t={self.t}, {len(self.foreground)} foreground cells)"


@dataclass(frozen=True)
class ValueBin:
    """A named inclusive gray-level range."""

    name: str
    lo: int
    hi: int

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi <= 255):
            raise ValueError(f"bin {self.name!r} range [{self.lo}, {self.hi}] invalid")

    def contains(self, level: int) -> bool:
        return self.lo <= level <= self.hi


DEFAULT_BINS = (
    ValueBin("black", 0, 0),
    ValueBin("gray", 1, 254),
    ValueBin("white", 255, 255),
)

_NAMED_BINS = {b.name: b for b in DEFAULT_BINS}


def parse_bins(text: str) -> tuple[ValueBin, ...]:
    """Parse a comma-separated bin list: named bins or custom "name=lo:hi"."""
    bins = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token in _NAMED_BINS:
            bins.append(_NAMED_BINS[token])
        elif "=" in token:
            name, _, rng = token.partition("=")
            lo, _, hi = rng.partition(":")
            bins.append(ValueBin(name, int(lo), int(hi)))
        else:
            raise ValueError(f"unknown bin {token!r}; use black/gray/white or name=lo:hi")
    if not bins:
        raise ValueError("no bins given")
    return tuple(bins)


@dataclass(frozen=True)
class PersistenceInterval:
    """A maximal run of frames during which every cell of a track's slice
    stays inside one value bin."""

    track_id: int
    bin: str
    birth: int
    death: int
    birth_seconds: float
    death_seconds: float


def segment(video: Video, t: int, tol: int = 0) -> SegmentationMask:
    """Classify frame t's voxels by change in forward differences against
    frame t+1.

    A cell is foreground when either partial-derivative delta between the two
    frames exceeds tol in magnitude. Cells in the last row or column, where a
    forward difference is undefined, are background by convention.
    """
    if t < 0:
        raise ValueError(f"frame index must be >= 0, got {t}")
    if t + 1 >= len(video):
        raise LastFrame(f"frame {t} has no successor; the final frame has no foreground")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    a = video[t].levels.astype(np.int16)
    b = video[t + 1].levels.astype(np.int16)
    h, w = a.shape
    fg = np.zeros((h, w), dtype=bool)
    if w > 1 and h > 1:
        ddx = np.abs((b[:, 1:] - b[:, :-1]) - (a[:, 1:] - a[:, :-1])) > tol
        ddy = np.abs((b[1:, :] - b[:-1, :]) - (a[1:, :] - a[:-1, :])) > tol
        fg[: h - 1, : w - 1] = ddx[: h - 1, :] | ddy[:, : w - 1]
    cells = frozenset((int(x), int(y)) for y, x in np.argwhere(fg))
    return SegmentationMask(t, Region(cells, (w, h)))


def track(video: Video, masks: Sequence[SegmentationMask],
          scheme: AdjacencyScheme) -> list[TrackedRegion]:
    """Link per-frame foreground components into tracked regions by overlap.

    Each component joins the live track whose previous slice it overlaps the
    most (ties go to the smaller id); with no overlap it starts a new track.
    Components linking to the same track merge into one slice. A track with
    no continuation dies and is never revived.
    """
    scheme = AdjacencyScheme.parse(scheme)
    masks = sorted(masks, key=lambda m: m.t)
    for prev, cur in zip(masks, masks[1:]):
        if cur.t != prev.t + 1:
            raise ValueError(f"masks must cover consecutive indices, got {prev.t} then {cur.t}")
    if not masks:
        return []
    extent = masks[0].foreground.extent
    if extent != video.extent:
        raise ValueError(f"mask extent {extent} differs from video extent {video.extent}")
    if masks[-1].t >= len(video):
        raise ValueError(f"mask index {masks[-1].t} beyond video of {len(video)} frames")
    n_frames = masks[-1].t + 1

    slices_by_id: dict[int, dict[int, set[Cell]]] = {}
    active: dict[int, frozenset[Cell]] = {}
    next_id = 0
    for mask in masks:
        comps = (connected_components(mask.foreground, scheme)
                 if mask.foreground.cells else [])
        now: dict[int, set[Cell]] = {}
        for comp in comps:
            best_id, best_overlap = None, 0
            for tid in sorted(active):
                overlap = len(comp.cells & active[tid])
                if overlap > best_overlap:
                    best_id, best_overlap = tid, overlap
            if best_id is None:
                best_id = next_id
                next_id += 1
            now.setdefault(best_id, set()).update(comp.cells)
        for tid, cells in now.items():
            slices_by_id.setdefault(tid, {})[mask.t] = cells
        active = {tid: frozenset(cells) for tid, cells in now.items()}

    empty = Region(frozenset(), extent)
    out = []
    for tid in sorted(slices_by_id):
        per_t = slices_by_id[tid]
        slices = tuple(
            Region(per_t[t], extent) if t in per_t else empty for t in range(n_frames))
        out.append(TrackedRegion(tid, slices))
    return out


def lifespan(a: TrackedRegion) -> tuple[int, int]:
    """(birth, death) frame indices; NeverPresent when no slice is nonempty."""
    return (a.birth, a.death)


def gap_distance(a: Region, b: Region) -> int:
    """Minimum Chebyshev distance over cell pairs; 0 iff the regions intersect."""
    if not a.cells:
        raise EmptySubimage("A is empty")
    if not b.cells:
        raise EmptySubimage("B is empty")
    if not a.cells.isdisjoint(b.cells):
        return 0
    return min(chebyshev(p, q) for p in a.cells for q in b.cells)


def _common_range(a: TrackedRegion, b: TrackedRegion) -> range:
    if a.extent != b.extent:
        raise ValueError(f"tracks live on different extents {a.extent} vs {b.extent}")
    return range(min(len(a.slices), len(b.slices)))


def temporally_near(a: TrackedRegion, b: TrackedRegion) -> tuple[bool, set[int]]:
    """Temporal discrete proximity: some frame where the slices intersect.

    Returns the verdict together with all witnessing frame indices.
    """
    witness = {
        t for t in _common_range(a, b)
        if not a.slices[t].cells.isdisjoint(b.slices[t].cells)
    }
    return (bool(witness), witness)


def temporally_metric_near(a: TrackedRegion, b: TrackedRegion, eps: float) -> bool:
    """Temporal metric proximity: some frame where both slices are present
    and their gap distance is at most eps."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    for t in _common_range(a, b):
        sa, sb = a.slices[t], b.slices[t]
        if sa.cells and sb.cells and gap_distance(sa, sb) <= eps:
            return True
    return False


def lifespans_overlap(a: TrackedRegion, b: TrackedRegion) -> bool:
    """Whether the [birth, death] intervals intersect (descriptive nearness
    of lifespans)."""
    ab, ad = lifespan(a)
    bb, bd = lifespan(b)
    return max(ab, bb) <= min(ad, bd)


def temporally_adjacent(a: TrackedRegion, b: TrackedRegion,
                        scheme: AdjacencyScheme) -> set[int] | None:
    """All frames where both slices are present and adjacent as subimages;
    None when there are none."""
    scheme = AdjacencyScheme.parse(scheme)
    times = {
        t for t in _common_range(a, b)
        if a.slices[t].cells and b.slices[t].cells
        and subimages_adjacent(a.slices[t], b.slices[t], scheme)
    }
    return times or None


def video_frame_connected(e: TrackedRegion, scheme: AdjacencyScheme) -> bool:
    """Every slice connected and consecutive slices adjacent, over the whole
    frame range of the track."""
    scheme = AdjacencyScheme.parse(scheme)
    for t, s in enumerate(e.slices):
        if not s.cells:
            raise NotFullSpan(f"track {e.id} is absent at frame {t}")
    if any(not is_connected(s, scheme) for s in e.slices):
        return False
    return all(
        subimages_adjacent(e.slices[t], e.slices[t + 1], scheme)
        for t in range(len(e.slices) - 1)
    )


def temporally_video_frame_connected(e: TrackedRegion,
                                     scheme: AdjacencyScheme) -> int | None:
    """The unique t' such that e is video-frame connected on [0, t'] and
    absent ever after; None when no such t' exists.

    A gap followed by reappearance rules t' out, as does absence at frame 0.
    """
    scheme = AdjacencyScheme.parse(scheme)
    last = None
    for t in range(len(e.slices) - 1, -1, -1):
        if e.slices[t].cells:
            last = t
            break
    if last is None or not e.slices[0].cells:
        return None
    for t in range(last + 1):
        if not e.slices[t].cells or not is_connected(e.slices[t], scheme):
            return None
        if t > 0 and not subimages_adjacent(e.slices[t - 1], e.slices[t], scheme):
            return None
    return last


def point_across_adjacent(p: Cell, t_a: int, q: Cell, t_b: int) -> bool:
    """Same (x, y) location in two distinct frames."""
    return tuple(p) == tuple(q) and t_a != t_b


def voxel_value_adjacent(frame_a: Frame, p: Cell, frame_b: Frame, q: Cell,
                         tol: int = 0) -> bool:
    """Equal (or tol-close) gray levels at two voxels of separate frames."""
    return abs(value_at(frame_a, p) - value_at(frame_b, q)) <= tol


def frame_value_adjacent(frame_a: Frame, frame_b: Frame, tol: int = 0) -> bool:
    """Whether the two frames share at least one gray level (within tol)."""
    la = np.unique(frame_a.levels)
    lb = np.unique(frame_b.levels)
    if tol == 0:
        return bool(np.intersect1d(la, lb).size)
    return bool(np.min(np.abs(la.astype(int)[:, None] - lb.astype(int)[None, :])) <= tol)


def location_value_adjacent(frame_a: Frame, a: Region, frame_b: Frame, b: Region,
                            tol: int = 0) -> bool:
    """Whether some voxel of A and some voxel of B carry equal (tol-close)
    gray levels."""
    la = {value_at(frame_a, c) for c in a.cells}
    lb = {value_at(frame_b, c) for c in b.cells}
    if tol == 0:
        return bool(la & lb)
    return any(abs(u - v) <= tol for u in la for v in lb)


_CROSS_FRAME_KINDS = {
    "point_across": point_across_adjacent,
    "voxel_value": voxel_value_adjacent,
    "frame_value": frame_value_adjacent,
    "location_value": location_value_adjacent,
}


def cross_frame_adjacent(kind: str, *args, **kwargs) -> bool:
    """Dispatch to one of the cross-frame adjacency predicates by name."""
    try:
        pred = _CROSS_FRAME_KINDS[kind]
    except KeyError:
        raise ValueError(
            f"unknown kind {kind!r}, expected one of {sorted(_CROSS_FRAME_KINDS)}")
    return pred(*args, **kwargs)


def map_track(f: Mapping[Cell, Cell], a: TrackedRegion,
              codomain: Extent) -> TrackedRegion:
    """Apply a lattice map slice-wise; empty slices stay empty."""
    return TrackedRegion(
        a.id,
        tuple(Region({f[c] for c in s.cells}, codomain) for s in a.slices),
    )


def check_temporal_continuity(
    f: Mapping[Cell, Cell],
    video_x: Video,
    video_y: Video,
    scheme: AdjacencyScheme,
    tracks: Sequence[TrackedRegion] | None = None,
    tol: int = 0,
) -> ContinuityVerdict:
    """Whether f preserves temporal adjacency between tracked regions of X.

    Tracks default to the segment-and-link pipeline over video_x. Besides
    adjacency preservation the check verifies that temporally near pairs map
    to temporally near pairs and that permanent disappearance transfers to
    the images.
    """
    scheme = AdjacencyScheme.parse(scheme)
    if len(video_x) != len(video_y):
        raise ValueError(
            f"videos must share a frame count, got {len(video_x)} and {len(video_y)}")
    xw, xh = video_x.extent
    yw, yh = video_y.extent
    for y in range(xh):
        for x in range(xw):
            if (x, y) not in f:
                raise PartialMap(f"map undefined at ({x}, {y})")
            fx, fy = f[(x, y)]
            if not (0 <= fx < yw and 0 <= fy < yh):
                raise OutOfExtent(f"f({x}, {y}) = {(fx, fy)} outside {yw}x{yh} codomain")

    if tracks is None:
        masks = [segment(video_x, t, tol) for t in range(len(video_x) - 1)]
        tracks = track(video_x, masks, scheme) if masks else []
    images = {a.id: map_track(f, a, video_y.extent) for a in tracks}

    for i, a in enumerate(tracks):
        for b in tracks[i + 1:]:
            fa, fb = images[a.id], images[b.id]
            if temporally_adjacent(a, b, scheme) is not None \
                    and temporally_adjacent(fa, fb, scheme) is None:
                return ContinuityVerdict(False, witness=(a, b),
                                         detail="temporal adjacency not preserved")
            if temporally_near(a, b)[0] and not temporally_near(fa, fb)[0]:
                return ContinuityVerdict(False, witness=(a, b),
                                         detail="temporal nearness not preserved")
    for a in tracks:
        t_prime = temporally_video_frame_connected(a, scheme)
        if t_prime is None:
            continue
        fa = images[a.id]
        for t in range(t_prime + 1, len(fa.slices)):
            if fa.slices[t].cells:
                return ContinuityVerdict(False, witness=(a,),
                                         detail="disappearance not transferred")
    return ContinuityVerdict(True)


def persistence_diagram(
    video: Video,
    tracks: Sequence[TrackedRegion],
    bins: Sequence[ValueBin] = DEFAULT_BINS,
) -> list[PersistenceInterval]:
    """Maximal runs of frames where all cells of a track's slice fall in one
    value bin.

    Frames with an empty slice never satisfy the all-cells predicate, so runs
    break across absences. Intervals come out ordered by track, then bin,
    then birth.
    """
    bins = tuple(bins)
    for i, u in enumerate(bins):
        for v in bins[i + 1:]:
            if u.lo <= v.hi and v.lo <= u.hi:
                raise OverlappingBins(f"bins {u.name!r} and {v.name!r} overlap")

    out: list[PersistenceInterval] = []
    for tr in tracks:
        if len(tr.slices) > len(video):
            raise ValueError(
                f"track {tr.id} spans {len(tr.slices)} frames, video has {len(video)}")
        if tr.extent != video.extent:
            raise ValueError(
                f"track {tr.id} extent {tr.extent} differs from video extent {video.extent}")
        for b in bins:
            run_start = None
            for t in range(len(tr.slices) + 1):
                ok = (
                    t < len(tr.slices)
                    and bool(tr.slices[t].cells)
                    and all(b.contains(video[t].level(x, y)) for x, y in tr.slices[t].cells)
                )
                if ok and run_start is None:
                    run_start = t
                elif not ok and run_start is not None:
                    out.append(PersistenceInterval(
                        tr.id, b.name, run_start, t - 1,
                        run_start / video.fps, (t - 1) / video.fps))
                    run_start = None
    return out
