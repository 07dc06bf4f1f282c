"""Lattice geometry, frames, videos, and per-voxel predicates.

Positions are (x, y) tuples of ints, x growing rightward and y downward.
Half-integer points (sub-pixel corners) are stored with doubled integer
coordinates so equality stays exact. Gray values are plain ints in [0, 255];
level/255 is the unit-interval brightness, 0 black and 255 white.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import MixedDimensions, OutOfExtent

Cell = tuple[int, int]
Extent = tuple[int, int]

BLACK = 0
WHITE = 255

#: voxel-level adjacency schemes accepted by :func:`voxels_adjacent`
VOXEL_SCHEMES = ("column", "row", "diagonal", "boundary")


@dataclass(frozen=True)
class HalfPoint:
    """A planar point at half-unit resolution, stored as doubled integers.

    (x2, y2) represents the point (x2/2, y2/2) exactly. Lattice points have
    even components, cell corners odd ones.
    """

    x2: int
    y2: int

    @property
    def x(self) -> float:
        return self.x2 / 2

    @property
    def y(self) -> float:
        return self.y2 / 2

    def __repr__(self) -> str:
        return f"HalfPoint({self.x2}/2, {self.y2}/2)"


@dataclass(frozen=True)
class TimeStamp:
    """Frame index plus its elapsed time in seconds (index / fps)."""

    index: int
    seconds: float

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"frame index must be >= 0, got {self.index}")
        if self.seconds < 0:
            raise ValueError(f"elapsed seconds must be >= 0, got {self.seconds}")


class Frame:
    """A grayscale value map on a width x height lattice at one elapsed time.

    Levels are held in a read-only uint8 array indexed [y, x]; the frame is
    immutable after construction.
    """

    __slots__ = ("levels", "time")

    def __init__(self, levels: np.ndarray, time: TimeStamp | None = None):
        arr = np.asarray(levels)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("frame needs a nonempty 2-D level array")
        if arr.dtype != np.uint8:
            if np.any((arr < 0) | (arr > 255)):
                raise ValueError("gray levels must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self.levels = arr
        self.time = time if time is not None else TimeStamp(0, 0.0)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], time: TimeStamp | None = None) -> "Frame":
        return cls(np.array([list(r) for r in rows], dtype=np.int64), time)

    @classmethod
    def constant(cls, width: int, height: int, level: int = 0,
                 time: TimeStamp | None = None) -> "Frame":
        if not (0 <= level <= 255):
            raise ValueError("gray levels must lie in [0, 255]")
        return cls(np.full((height, width), level, dtype=np.uint8), time)

    @property
    def width(self) -> int:
        return self.levels.shape[1]

    @property
    def height(self) -> int:
        return self.levels.shape[0]

    @property
    def extent(self) -> Extent:
        return (self.width, self.height)

    def contains(self, p: Cell) -> bool:
        x, y = p
        return 0 <= x < self.width and 0 <= y < self.height

    def level(self, x: int, y: int) -> int:
        if not self.contains((x, y)):
            raise OutOfExtent(f"position ({x}, {y}) outside {self.width}x{self.height} frame")
        return int(self.levels[y, x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return self.time == other.time and np.array_equal(self.levels, other.levels)

    def __repr__(self) -> str:
        return f"Frame({self.width}x{self.height}, t={self.time.index})"


class Video:
    """A nonempty, time-ordered sequence of same-extent frames."""

    __slots__ = ("frames", "fps")

    def __init__(self, frames: Iterable[Frame], fps: float = 1.0):
        frames = tuple(frames)
        if not frames:
            raise ValueError("a video needs at least one frame")
        if fps <= 0:
            raise ValueError("fps must be positive")
        extent = frames[0].extent
        for k, fr in enumerate(frames):
            if fr.extent != extent:
                raise MixedDimensions(
                    f"frame {k} is {fr.extent[0]}x{fr.extent[1]}, expected {extent[0]}x{extent[1]}")
            if fr.time.index != k:
                raise ValueError(f"frame {k} carries index {fr.time.index}")
        self.frames = frames
        self.fps = float(fps)

    @classmethod
    def from_arrays(cls, arrays: Iterable[np.ndarray], fps: float = 1.0) -> "Video":
        if fps <= 0:
            raise ValueError("fps must be positive")
        frames = [Frame(a, TimeStamp(k, k / fps)) for k, a in enumerate(arrays)]
        return cls(frames, fps)

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, k: int) -> Frame:
        return self.frames[k]

    def __iter__(self) -> Iterator[Frame]:
        return iter(self.frames)

    @property
    def extent(self) -> Extent:
        return self.frames[0].extent

    def __repr__(self) -> str:
        w, h = self.extent
        return f"Video({len(self.frames)} frames, {w}x{h}, fps={self.fps})"


@dataclass(frozen=True)
class Region:
    """A finite set of lattice positions within one frame extent.

    May be empty: tracked regions use empty slices for frames where the
    object is absent. Operations that require a subimage reject empty input.
    """

    cells: frozenset[Cell]
    extent: Extent

    def __init__(self, cells: Iterable[Cell], extent: Extent):
        cells = frozenset((int(x), int(y)) for x, y in cells)
        w, h = extent
        if w < 1 or h < 1:
            raise ValueError(f"extent must be positive, got {extent}")
        for x, y in cells:
            if not (0 <= x < w and 0 <= y < h):
                raise OutOfExtent(f"cell ({x}, {y}) outside {w}x{h} extent")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "extent", (int(w), int(h)))

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, p: Cell) -> bool:
        return p in self.cells

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.cells)

    def __bool__(self) -> bool:
        return bool(self.cells)

    def sorted_cells(self) -> list[Cell]:
        """Cells in row-major order (top row first, left to right)."""
        return sorted(self.cells, key=lambda c: (c[1], c[0]))

    def __repr__(self) -> str:
        w, h = self.extent
        return f"Region({len(self.cells)} cells in {w}x{h})"


def boundary_corners(p: Cell) -> frozenset[HalfPoint]:
    """The four corner sub-pixels (x +- 1/2, y +- 1/2) of a lattice cell."""
    x, y = p
    return frozenset(
        HalfPoint(2 * x + sx, 2 * y + sy) for sx in (-1, 1) for sy in (-1, 1)
    )


def _column_adjacent(p: Cell, q: Cell) -> bool:
    return p[0] == q[0] and abs(p[1] - q[1]) == 1


def _row_adjacent(p: Cell, q: Cell) -> bool:
    return p[1] == q[1] and abs(p[0] - q[0]) == 1


def _diagonal_adjacent(p: Cell, q: Cell) -> bool:
    return abs(p[0] - q[0]) == 1 and abs(p[1] - q[1]) == 1


def _boundary_adjacent(p: Cell, q: Cell) -> bool:
    return p != q and bool(boundary_corners(p) & boundary_corners(q))


_VOXEL_PREDICATES = {
    "column": _column_adjacent,
    "row": _row_adjacent,
    "diagonal": _diagonal_adjacent,
    "boundary": _boundary_adjacent,
}


def voxels_adjacent(p: Cell, q: Cell, scheme: str) -> bool:
    """Whether two lattice cells are adjacent under a voxel-level scheme.

    Schemes: "column" (same column, rows differ by 1), "row" (same row,
    columns differ by 1), "diagonal" (both differ by 1), "boundary"
    (corner sub-pixel sets intersect). Irreflexive: p == q is never adjacent.
    """
    try:
        pred = _VOXEL_PREDICATES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {VOXEL_SCHEMES}")
    return pred(tuple(p), tuple(q))


def chebyshev(p: Cell, q: Cell) -> int:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def partial_derivative(f: Frame, p: Cell, axis: str) -> int:
    """Forward difference of gray levels at p along "x" or "y".

    Raises OutOfExtent when p or its axis-successor leaves the frame; the
    caller decides the edge convention.
    """
    x, y = p
    if axis == "x":
        succ = (x + 1, y)
    elif axis == "y":
        succ = (x, y + 1)
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return f.level(*succ) - f.level(x, y)


def value_at(f: Frame, p: Cell) -> int:
    """Gray level at p; OutOfExtent outside the frame."""
    return f.level(*p)
