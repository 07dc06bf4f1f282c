"""Set-level adjacency, connectedness, continuity, and Jordan partitioning
within a single frame.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .core import Cell, Extent, Frame, Region
from .errors import DegenerateCycle, EmptySubimage, NotACycle, OutOfExtent, PartialMap

# neighbor offsets in row-major scan order; four = column + row adjacency,
# eight additionally includes the diagonals
_OFFSETS_FOUR = ((0, -1), (-1, 0), (1, 0), (0, 1))
_OFFSETS_EIGHT = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))
_FORWARD_FOUR = ((1, 0), (0, 1))
_FORWARD_EIGHT = ((1, 0), (-1, 1), (0, 1), (1, 1))


class AdjacencyScheme(enum.Enum):
    """Lattice adjacency used by set-level operations."""

    FOUR = "4"
    EIGHT = "8"

    @classmethod
    def parse(cls, text: str | "AdjacencyScheme") -> "AdjacencyScheme":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text))
        except ValueError:
            raise ValueError(f"adjacency scheme must be '4' or '8', got {text!r}")

    @property
    def offsets(self) -> tuple[tuple[int, int], ...]:
        return _OFFSETS_FOUR if self is AdjacencyScheme.FOUR else _OFFSETS_EIGHT

    @property
    def forward_offsets(self) -> tuple[tuple[int, int], ...]:
        return _FORWARD_FOUR if self is AdjacencyScheme.FOUR else _FORWARD_EIGHT

    def adjacent(self, p: Cell, q: Cell) -> bool:
        """Distinct cells at the right lattice distance (irreflexive)."""
        if p == q:
            return False
        dx, dy = abs(p[0] - q[0]), abs(p[1] - q[1])
        if self is AdjacencyScheme.FOUR:
            return dx + dy == 1
        return max(dx, dy) == 1

    def neighbors(self, p: Cell):
        x, y = p
        for dx, dy in self.offsets:
            yield (x + dx, y + dy)


FOUR = AdjacencyScheme.FOUR
EIGHT = AdjacencyScheme.EIGHT


@dataclass(frozen=True)
class ContinuityVerdict:
    """Outcome of a continuity check.

    When the check fails, ``witness`` names the violating pair (cells for the
    single-frame check, tracked regions for the temporal one) and ``detail``
    says which clause broke.
    """

    holds: bool
    witness: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class OneCycle:
    """A cyclically ordered chain of lattice cells with no repeats."""

    vertices: tuple[Cell, ...]

    def __init__(self, vertices):
        object.__setattr__(self, "vertices", tuple((int(x), int(y)) for x, y in vertices))

    def edges(self) -> list[tuple[Cell, Cell]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def validate(self) -> None:
        """Raise NotACycle unless this is a simple closed chain (eight scheme)."""
        vs = self.vertices
        if len(vs) < 4:
            raise NotACycle(f"a cycle with nonempty interior needs >= 4 vertices, got {len(vs)}")
        if len(set(vs)) != len(vs):
            raise NotACycle("repeated vertex (self-loop)")
        for a, b in self.edges():
            if not EIGHT.adjacent(a, b):
                raise NotACycle(f"consecutive vertices {a} and {b} are not adjacent")

    def __len__(self) -> int:
        return len(self.vertices)


def _require_subimage(r: Region, name: str) -> None:
    if not r.cells:
        raise EmptySubimage(f"{name} is empty; every subimage must be nonempty")


def _require_same_extent(a: Region, b: Region) -> None:
    if a.extent != b.extent:
        raise ValueError(f"regions live on different extents {a.extent} vs {b.extent}")


def near_discrete(a: Region, b: Region) -> bool:
    """Discrete proximity: the two subimages share at least one cell."""
    _require_subimage(a, "A")
    _require_subimage(b, "B")
    _require_same_extent(a, b)
    return not a.cells.isdisjoint(b.cells)


def subimages_adjacent(a: Region, b: Region, scheme: AdjacencyScheme) -> bool:
    """Whether some p in A and q in B coincide or are adjacent under scheme."""
    _require_subimage(a, "A")
    _require_subimage(b, "B")
    _require_same_extent(a, b)
    scheme = AdjacencyScheme.parse(scheme)
    small, large = (a.cells, b.cells) if len(a) <= len(b) else (b.cells, a.cells)
    for p in small:
        if p in large:
            return True
        for q in scheme.neighbors(p):
            if q in large:
                return True
    return False


def connected_components(r: Region, scheme: AdjacencyScheme) -> list[Region]:
    """Partition of R into maximal connected subregions.

    Deterministic: components are ordered by their row-major minimal cell,
    which is also each component's BFS seed.
    """
    _require_subimage(r, "R")
    scheme = AdjacencyScheme.parse(scheme)
    cells = r.cells
    seen: set[Cell] = set()
    out: list[Region] = []
    for seed in sorted(cells, key=lambda c: (c[1], c[0])):
        if seed in seen:
            continue
        comp = {seed}
        seen.add(seed)
        queue = deque([seed])
        while queue:
            p = queue.popleft()
            for q in scheme.neighbors(p):
                if q in cells and q not in seen:
                    seen.add(q)
                    comp.add(q)
                    queue.append(q)
        out.append(Region(comp, r.extent))
    return out


def is_connected(r: Region, scheme: AdjacencyScheme) -> bool:
    return len(connected_components(r, scheme)) == 1


def check_kappa_continuity(
    f: Mapping[Cell, Cell],
    x_extent: Extent,
    y_extent: Extent,
    scheme: AdjacencyScheme,
) -> ContinuityVerdict:
    """Whether f carries adjacent subimages to adjacent (or equal) ones.

    Checked at pixel granularity: set-level adjacency is always witnessed by
    a cell pair, so it suffices that every adjacent pair (p, q) maps to equal
    or adjacent cells. The witness, if any, is the first violating pair in
    row-major scan order.
    """
    scheme = AdjacencyScheme.parse(scheme)
    xw, xh = x_extent
    yw, yh = y_extent
    for y in range(xh):
        for x in range(xw):
            p = (x, y)
            if p not in f:
                raise PartialMap(f"map undefined at {p}")
            fx, fy = f[p]
            if not (0 <= fx < yw and 0 <= fy < yh):
                raise OutOfExtent(f"f{p} = {(fx, fy)} outside {yw}x{yh} codomain")
    for y in range(xh):
        for x in range(xw):
            p = (x, y)
            for dx, dy in scheme.forward_offsets:
                q = (x + dx, y + dy)
                if not (0 <= q[0] < xw and 0 <= q[1] < xh):
                    continue
                if f[p] != f[q] and not scheme.adjacent(f[p], f[q]):
                    return ContinuityVerdict(False, witness=(p, q),
                                             detail="adjacent cells map to non-adjacent images")
    return ContinuityVerdict(True)


def jordan_partition(cycle: OneCycle, extent: Extent) -> tuple[Region, Region]:
    """Split a frame extent into the interior and exterior of a simple cycle.

    The cycle is validated under the eight scheme; its complement is split
    into four-connected components (the classical pairing that makes the
    partition claim hold on a lattice). Components touching the extent border
    form the exterior, the rest the interior.
    """
    cycle.validate()
    w, h = extent
    ring = set(cycle.vertices)
    for x, y in ring:
        if not (0 <= x < w and 0 <= y < h):
            raise OutOfExtent(f"cycle vertex ({x}, {y}) outside {w}x{h} extent")

    seen: set[Cell] = set()
    interior: set[Cell] = set()
    exterior: set[Cell] = set()
    for sy in range(h):
        for sx in range(w):
            seed = (sx, sy)
            if seed in ring or seed in seen:
                continue
            comp = {seed}
            seen.add(seed)
            queue = deque([seed])
            touches_border = False
            while queue:
                x, y = queue.popleft()
                if x in (0, w - 1) or y in (0, h - 1):
                    touches_border = True
                for q in FOUR.neighbors((x, y)):
                    if (0 <= q[0] < w and 0 <= q[1] < h
                            and q not in ring and q not in seen):
                        seen.add(q)
                        comp.add(q)
                        queue.append(q)
            (exterior if touches_border else interior).update(comp)

    if not interior:
        raise DegenerateCycle("cycle encloses no cells")
    return Region(interior, extent), Region(exterior, extent)


def cat_number(e: Region, f: Frame, scheme: AdjacencyScheme) -> tuple[int, list[Region]]:
    """Minimum cover of E by connected, value-constant subregions.

    The cover is the set of connected components of E's gray-level classes;
    maximal components cannot be merged, so the partition is both canonical
    and minimal. Ordered by row-major minimal cell.
    """
    _require_subimage(e, "E")
    if e.extent != f.extent:
        raise ValueError(f"region extent {e.extent} differs from frame extent {f.extent}")
    scheme = AdjacencyScheme.parse(scheme)
    by_level: dict[int, set[Cell]] = {}
    for cell in e.cells:
        by_level.setdefault(f.level(*cell), set()).add(cell)
    cover: list[Region] = []
    for level_cells in by_level.values():
        cover.extend(connected_components(Region(level_cells, e.extent), scheme))
    cover.sort(key=lambda r: min((c[1], c[0]) for c in r.cells))
    return len(cover), cover
