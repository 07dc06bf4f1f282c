"""Synthetic scene generation with ground truth.

A scene is a list of shape tracks rendered over a constant background;
later shapes overdraw earlier ones. Generation emits the video together
with ground-truth tracked regions (visible cells per frame) and, for use
as a segmentation oracle, per-pair change masks computed by direct
per-cell evaluation of the forward-difference formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Cell, Region, Video
from .errors import ShapeOutOfExtent
from .temporal import TrackedRegion


@dataclass(frozen=True)
class ShapeTrack:
    """One shape with a gray level and a per-frame anchor (None = absent)."""

    kind: str  # "rectangle" or "triangle"
    level: int
    size: tuple[int, int]
    positions: tuple[Cell | None, ...]

    def __post_init__(self):
        if self.kind not in ("rectangle", "triangle"):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if not (0 <= self.level <= 255):
            raise ValueError("shape level must lie in [0, 255]")
        if self.size[0] < 1 or self.size[1] < 1:
            raise ValueError("shape size must be positive")


@dataclass(frozen=True)
class SceneSpec:
    width: int
    height: int
    frame_count: int
    fps: float = 1.0
    background: int = 0
    shapes: tuple[ShapeTrack, ...] = ()

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.frame_count < 1:
            raise ValueError("scene needs positive extent and frame count")
        for shape in self.shapes:
            if len(shape.positions) != self.frame_count:
                raise ValueError(
                    f"shape has {len(shape.positions)} positions for "
                    f"{self.frame_count} frames")


@dataclass(frozen=True)
class GroundTruth:
    """Per-shape tracked regions (visible cells) and analytic change masks."""

    tracks: tuple[TrackedRegion, ...]
    change_masks: tuple[frozenset[Cell], ...]  # one per consecutive frame pair


def shape_cells(kind: str, size: tuple[int, int], anchor: Cell) -> set[Cell]:
    """Cells covered by a shape anchored at its top-left corner.

    Triangles are isoceles with the apex on the top row; use an odd width
    for a single-cell apex.
    """
    w, h = size
    ax, ay = anchor
    if kind == "rectangle":
        return {(ax + dx, ay + dy) for dx in range(w) for dy in range(h)}
    cells = set()
    for dy in range(h):
        for dx in range(w):
            if h == 1 or abs(2 * dx - (w - 1)) * (h - 1) <= dy * (w - 1):
                cells.add((ax + dx, ay + dy))
    return cells


def _change_mask(a: np.ndarray, b: np.ndarray) -> frozenset[Cell]:
    # direct per-cell evaluation, independent of the vectorized segmentation
    h, w = a.shape
    fg = set()
    for y in range(h - 1):
        for x in range(w - 1):
            ddx = (int(b[y][x + 1]) - int(b[y][x])) - (int(a[y][x + 1]) - int(a[y][x]))
            ddy = (int(b[y + 1][x]) - int(b[y][x])) - (int(a[y + 1][x]) - int(a[y][x]))
            if ddx != 0 or ddy != 0:
                fg.add((x, y))
    return frozenset(fg)


def generate_scene(spec: SceneSpec) -> tuple[Video, GroundTruth]:
    """Render a scene deterministically and derive its ground truth."""
    extent = (spec.width, spec.height)
    frames = []
    visible_per_shape: list[list[set[Cell]]] = [[] for _ in spec.shapes]
    for t in range(spec.frame_count):
        levels = np.full((spec.height, spec.width), spec.background, dtype=np.uint8)
        covered_by: list[set[Cell]] = []
        for shape in spec.shapes:
            anchor = shape.positions[t]
            if anchor is None:
                covered_by.append(set())
                continue
            cells = shape_cells(shape.kind, shape.size, anchor)
            for x, y in cells:
                if not (0 <= x < spec.width and 0 <= y < spec.height):
                    raise ShapeOutOfExtent(
                        f"{shape.kind} at {anchor} leaves the "
                        f"{spec.width}x{spec.height} extent in frame {t}")
                levels[y, x] = shape.level
            covered_by.append(cells)
        frames.append(levels)
        # visibility: later shapes overdraw earlier ones
        for i in range(len(spec.shapes)):
            overdrawn = set().union(*covered_by[i + 1:]) if i + 1 < len(covered_by) else set()
            visible_per_shape[i].append(covered_by[i] - overdrawn)

    video = Video.from_arrays(frames, fps=spec.fps)
    tracks = tuple(
        TrackedRegion(i, tuple(Region(cells, extent) for cells in per_t))
        for i, per_t in enumerate(visible_per_shape)
    )
    masks = tuple(_change_mask(frames[t], frames[t + 1])
                  for t in range(spec.frame_count - 1))
    return video, GroundTruth(tracks, masks)


def _bounce(t: int, lo: int, hi: int) -> int:
    """Position of a unit-speed point bouncing between lo and hi."""
    span = hi - lo
    if span <= 0:
        return lo
    phase = t % (2 * span)
    return lo + phase if phase <= span else lo + 2 * span - phase


PRESETS = ("fig4", "moving-square")


def preset_scene(name: str, frames: int | None = None, width: int | None = None,
                 height: int | None = None, fps: float | None = None) -> SceneSpec:
    """Built-in scenes.

    "fig4": on a white ground, a black triangle in the first frame only,
    then a gray triangle drifting right through the remaining frames.
    "moving-square": a white square on a black ground moving right one cell
    per frame (bouncing off the walls on long runs).
    """
    if name == "fig4":
        n = frames or 4
        w = width or 32
        h = height or 32
        if n < 2:
            raise ValueError("fig4 needs at least 2 frames")
        black = ShapeTrack("triangle", 0, (7, 6),
                           ((4, 4),) + (None,) * (n - 1))
        gray_pos: list[Cell | None] = [None]
        for t in range(1, n):
            gray_pos.append((_bounce(t - 1, 16, w - 9), 12))
        gray = ShapeTrack("triangle", 128, (7, 6), tuple(gray_pos))
        return SceneSpec(w, h, n, fps or 1.0, background=255, shapes=(black, gray))
    if name == "moving-square":
        n = frames or 8
        w = width or 64
        h = height or 64
        square = ShapeTrack("rectangle", 255, (4, 4),
                            tuple((_bounce(t, 2, w - 6), 8) for t in range(n)))
        return SceneSpec(w, h, n, fps or 1.0, background=0, shapes=(square,))
    raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")
