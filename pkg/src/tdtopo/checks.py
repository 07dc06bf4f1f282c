"""Randomized property harness for the library's stated invariants.

Each check draws its own RNG from (seed, check name), so reports are
byte-identical for identical (suite, size, seed) regardless of execution
order. A check returns None on success or a short counterexample payload.
"""

from __future__ import annotations

import random
from typing import Callable

import numpy as np

from .core import (
    Frame,
    Region,
    Video,
    boundary_corners,
    chebyshev,
    partial_derivative,
    voxels_adjacent,
)
from .report import base_document, canonical_json, sha256_hex
from .temporal import (
    TrackedRegion,
    gap_distance,
    lifespans_overlap,
    map_track,
    persistence_diagram,
    segment,
    temporally_metric_near,
    temporally_near,
    temporally_video_frame_connected,
    track,
)
from .topology import (
    EIGHT,
    FOUR,
    OneCycle,
    cat_number,
    check_kappa_continuity,
    connected_components,
    is_connected,
    jordan_partition,
    near_discrete,
    subimages_adjacent,
)

MAX_CHECK_SIZE = 32
SUITES = ("core", "topology", "temporal")


# ---------------------------------------------------------------------------
# generators

def _random_cells(rng, width, height, n):
    cells = [(x, y) for x in range(width) for y in range(height)]
    return set(rng.sample(cells, min(n, len(cells))))


def _random_connected_cells(rng, width, height, n):
    seed = (rng.randrange(width), rng.randrange(height))
    cells = {seed}
    while len(cells) < n:
        x, y = rng.choice(sorted(cells))
        q = (x + rng.choice((-1, 0, 1)), y + rng.choice((-1, 0, 1)))
        if 0 <= q[0] < width and 0 <= q[1] < height:
            cells.add(q)
    return cells


def _monotone_steps(rng, n):
    values = [rng.randrange(0, 2)]
    for _ in range(n - 1):
        values.append(values[-1] + rng.choice((0, 1)))
    return values


def _random_continuous_map(rng, width, height):
    """Adjacency-preserving by construction: per-axis monotone unit steps,
    optional axis swap and reflection, occasionally constant."""
    if rng.random() < 0.15:
        target = (rng.randrange(width), rng.randrange(height))
        return ({(x, y): target for x in range(width) for y in range(height)},
                (width, height))
    fx = _monotone_steps(rng, width)
    fy = _monotone_steps(rng, height)
    swap = rng.random() < 0.3
    flip = rng.random() < 0.3
    mapping = {}
    for x in range(width):
        for y in range(height):
            u, v = fx[x], fy[y]
            if flip:
                u = fx[-1] - u
            if swap:
                u, v = v, u
            mapping[(x, y)] = (u, v)
    w2 = max(c[0] for c in mapping.values()) + 1
    h2 = max(c[1] for c in mapping.values()) + 1
    return mapping, (w2, h2)


def _random_ring(rng, grid):
    x0 = rng.randint(1, grid - 5)
    y0 = rng.randint(1, grid - 5)
    x1 = rng.randint(x0 + 2, min(grid - 2, x0 + 8))
    y1 = rng.randint(y0 + 2, min(grid - 2, y0 + 8))
    top = tuple(c for c in range(x0 + 1, x1) if rng.random() < 0.25)
    bottom = tuple(c for c in range(x0 + 1, x1) if rng.random() < 0.25)
    verts = []
    for c in range(x0, x1 + 1):
        verts.append((c, y0 - 1) if c in top else (c, y0))
    for r in range(y0 + 1, y1 + 1):
        verts.append((x1, r))
    for c in range(x1 - 1, x0 - 1, -1):
        verts.append((c, y1 + 1) if c in bottom else (c, y1))
    for r in range(y1 - 1, y0, -1):
        verts.append((x0, r))
    analytic = (x1 - x0 - 1) * (y1 - y0 - 1) + len(top) + len(bottom)
    return verts, analytic


def _random_track(rng, width, height, n_frames, tid):
    birth = rng.randrange(n_frames)
    death = rng.randrange(birth, n_frames)
    side = rng.randint(1, 3)
    x = rng.randrange(width - side + 1)
    y = rng.randrange(height - side + 1)
    slices = []
    for t in range(n_frames):
        if birth <= t <= death:
            slices.append(Region(
                {(x + dx, y + dy) for dx in range(side) for dy in range(side)},
                (width, height)))
            x = min(max(x + rng.choice((-1, 0, 1)), 0), width - side)
            y = min(max(y + rng.choice((-1, 0, 1)), 0), height - side)
        else:
            slices.append(Region(set(), (width, height)))
    return TrackedRegion(tid, slices)


def _random_blob_video(rng, width, height, n_frames):
    """Frames with one or two drifting bright rectangles on black ground."""
    n_blobs = rng.randint(1, 2)
    blobs = []
    for _ in range(n_blobs):
        side = rng.randint(2, 3)
        blobs.append([rng.randrange(width - side), rng.randrange(height - side),
                      side, rng.randint(100, 255)])
    frames = []
    for _ in range(n_frames):
        levels = np.zeros((height, width), dtype=np.uint8)
        for blob in blobs:
            x, y, side, level = blob
            levels[y:y + side, x:x + side] = level
            blob[0] = min(max(x + rng.choice((-1, 0, 1)), 0), width - side)
            blob[1] = min(max(y + rng.choice((-1, 0, 1)), 0), height - side)
        frames.append(levels)
    return Video.from_arrays(frames)


# ---------------------------------------------------------------------------
# core checks

def check_adjacency_symmetric(size, rng):
    for _ in range(size * 8):
        p = (rng.randrange(size), rng.randrange(size))
        q = (rng.randrange(size), rng.randrange(size))
        for scheme in ("column", "row", "diagonal", "boundary"):
            if voxels_adjacent(p, q, scheme) != voxels_adjacent(q, p, scheme):
                return f"asymmetric {scheme} at p={p} q={q}"
    return None


def check_boundary_equals_chebyshev(size, rng, predicate: Callable | None = None):
    """Boundary-corner adjacency must equal Chebyshev distance 1, exhaustively."""
    pred = predicate or (lambda p, q: voxels_adjacent(p, q, "boundary"))
    cells = [(x, y) for x in range(size) for y in range(size)]
    for p in cells:
        for q in cells:
            want = p != q and chebyshev(p, q) == 1
            if pred(p, q) != want:
                return f"disagreement at p={p} q={q}"
    return None


def check_diagonal_implies_boundary(size, rng):
    grid = min(size, 10)
    for x in range(grid):
        for y in range(grid):
            for qx in range(grid):
                for qy in range(grid):
                    if voxels_adjacent((x, y), (qx, qy), "diagonal") and \
                            not voxels_adjacent((x, y), (qx, qy), "boundary"):
                        return f"diagonal without boundary at {(x, y)} {(qx, qy)}"
    return None


def check_corner_intersection_sizes(size, rng):
    grid = min(size, 8)
    cells = [(x, y) for x in range(grid) for y in range(grid)]
    for p in cells:
        for q in cells:
            if p == q:
                continue
            shared = len(boundary_corners(p) & boundary_corners(q))
            if voxels_adjacent(p, q, "row") or voxels_adjacent(p, q, "column"):
                want = 2
            elif voxels_adjacent(p, q, "diagonal"):
                want = 1
            else:
                want = 0
            if shared != want:
                return f"{shared} shared corners at {p} {q}, expected {want}"
    return None


def check_derivative_zero_iff_constant(size, rng):
    nprng = np.random.default_rng(rng.getrandbits(32))
    for _ in range(size):
        arr = nprng.integers(0, 256, size=(8, 8))
        if rng.random() < 0.5:
            arr[:] = arr[0, 0]
        f = Frame(arr)
        all_zero = all(
            partial_derivative(f, (x, y), "x") == 0
            for x in range(7) for y in range(8)
        ) and all(
            partial_derivative(f, (x, y), "y") == 0
            for x in range(8) for y in range(7)
        )
        constant = bool(np.all(arr == arr[0, 0]))
        if all_zero != constant:
            return f"derivative/constant mismatch on frame {arr.tolist()}"
    return None


# ---------------------------------------------------------------------------
# topology checks

def check_discrete_implies_adjacent(size, rng):
    for _ in range(size * 4):
        a = Region(_random_cells(rng, 8, 8, rng.randint(1, 10)), (8, 8))
        b = Region(_random_cells(rng, 8, 8, rng.randint(1, 10)), (8, 8))
        if near_discrete(a, b):
            for scheme in (FOUR, EIGHT):
                if not subimages_adjacent(a, b, scheme):
                    return f"near but not adjacent: {sorted(a.cells)} {sorted(b.cells)}"
    return None


def _flood_fill(cells, offsets):
    remaining = set(cells)
    parts = set()
    while remaining:
        stack = [min(remaining)]
        comp = set()
        while stack:
            c = stack.pop()
            if c not in remaining:
                continue
            remaining.discard(c)
            comp.add(c)
            stack.extend((c[0] + dx, c[1] + dy) for dx, dy in offsets)
        parts.add(frozenset(comp))
    return parts


def check_components_match_flood_fill(size, rng):
    for _ in range(size * 2):
        cells = _random_cells(rng, 12, 12, rng.randint(1, 40))
        r = Region(cells, (12, 12))
        for scheme in (FOUR, EIGHT):
            got = {p.cells for p in connected_components(r, scheme)}
            want = _flood_fill(cells, scheme.offsets)
            if got != want:
                return f"partition mismatch ({scheme.value}) on {sorted(cells)}"
    return None


def check_components_partition(size, rng):
    for _ in range(size * 2):
        cells = _random_cells(rng, 10, 10, rng.randint(1, 30))
        r = Region(cells, (10, 10))
        parts = connected_components(r, EIGHT)
        if [p.cells for p in parts] != [p.cells for p in connected_components(r, EIGHT)]:
            return f"nondeterministic output on {sorted(cells)}"
        union = set()
        for p in parts:
            if union & p.cells:
                return f"overlapping components on {sorted(cells)}"
            union |= p.cells
            if not is_connected(p, EIGHT):
                return f"disconnected component on {sorted(cells)}"
        if union != cells:
            return f"union misses cells on {sorted(cells)}"
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if subimages_adjacent(parts[i], parts[j], EIGHT):
                    return f"non-maximal components on {sorted(cells)}"
    return None


def check_continuity_preserves_connectedness(size, rng):
    for _ in range(size):
        mapping, codomain = _random_continuous_map(rng, 8, 8)
        verdict = check_kappa_continuity(mapping, (8, 8), codomain, EIGHT)
        if not verdict.holds:
            return f"generated map not continuous, witness {verdict.witness}"
        for _ in range(8):
            cells = _random_connected_cells(rng, 8, 8, rng.randint(1, 10))
            image = Region({mapping[c] for c in cells}, codomain)
            if not is_connected(image, EIGHT):
                return f"image of connected region disconnected: {sorted(cells)}"
    return None


def check_jordan_rings(size, rng):
    grid = max(size, 12)
    for _ in range(size):
        verts, analytic = _random_ring(rng, grid)
        interior, exterior = jordan_partition(OneCycle(verts), (grid, grid))
        if len(interior) != analytic:
            return f"interior {len(interior)} != analytic {analytic} for ring {verts}"
        if interior.cells & exterior.cells:
            return f"interior/exterior overlap for ring {verts}"
        if (interior.cells | exterior.cells) & set(verts):
            return f"cycle vertex in partition for ring {verts}"
        if interior.cells | exterior.cells | set(verts) != \
                {(x, y) for x in range(grid) for y in range(grid)}:
            return f"partition misses cells for ring {verts}"
    return None


def check_cat_cover(size, rng):
    for _ in range(size):
        levels = [[rng.choice((0, 100, 255)) for _ in range(6)] for _ in range(6)]
        f = Frame.from_rows(levels)
        cells = _random_cells(rng, 6, 6, rng.randint(1, 12))
        e = Region(cells, (6, 6))
        count, cover = cat_number(e, f, EIGHT)
        union = set()
        for part in cover:
            if len({levels[y][x] for x, y in part.cells}) != 1:
                return f"part not value-constant on {sorted(cells)}"
            if not is_connected(part, EIGHT):
                return f"part not connected on {sorted(cells)}"
            union |= part.cells
        if union != cells or count != len(cover):
            return f"cover not a partition on {sorted(cells)}"
        for i in range(len(cover)):
            for j in range(i + 1, len(cover)):
                vi = {levels[y][x] for x, y in cover[i].cells}
                vj = {levels[y][x] for x, y in cover[j].cells}
                if vi == vj and subimages_adjacent(cover[i], cover[j], EIGHT):
                    return f"mergeable parts on {sorted(cells)}"
    return None


# ---------------------------------------------------------------------------
# temporal checks

def check_segment_partition(size, rng):
    nprng = np.random.default_rng(rng.getrandbits(32))
    for _ in range(size):
        a = nprng.integers(0, 256, size=(size, size))
        b = a.copy() if rng.random() < 0.3 else nprng.integers(0, 256, size=(size, size))
        v = Video.from_arrays([a, b])
        tol = rng.choice((0, 2))
        mask = segment(v, 0, tol)
        full = {(x, y) for x in range(size) for y in range(size)}
        if mask.foreground.cells | mask.background.cells != full:
            return "foreground/background do not cover the extent"
        if mask.foreground.cells & mask.background.cells:
            return "foreground/background overlap"
        dxa = a[:, 1:].astype(int) - a[:, :-1].astype(int)
        dxb = b[:, 1:].astype(int) - b[:, :-1].astype(int)
        dya = a[1:, :].astype(int) - a[:-1, :].astype(int)
        dyb = b[1:, :].astype(int) - b[:-1, :].astype(int)
        fields_agree = bool(np.all(np.abs(dxb - dxa) <= tol)
                            and np.all(np.abs(dyb - dya) <= tol))
        if (not mask.foreground.cells) != fields_agree:
            return f"empty-foreground equivalence broken at tol={tol}"
    return None


def check_proximity_implications(size, rng):
    for _ in range(size * 4):
        a = _random_track(rng, 8, 8, 6, 0)
        b = _random_track(rng, 8, 8, 6, 1)
        tnear, _ = temporally_near(a, b)
        if tnear:
            for eps in (0, 1, 2):
                if not temporally_metric_near(a, b, eps):
                    return f"tnear without mnear(eps={eps})"
            if not lifespans_overlap(a, b):
                return "tnear without lifespan overlap"
        if temporally_metric_near(a, b, 0) != tnear:
            return "mnear(0) disagrees with tnear"
    return None


def check_same_time_mnear(size, rng):
    for _ in range(size * 2):
        t = rng.randrange(4)
        a = TrackedRegion(0, tuple(
            Region(_random_cells(rng, 8, 8, 2) if i == t else set(), (8, 8))
            for i in range(4)))
        b = TrackedRegion(1, tuple(
            Region(_random_cells(rng, 8, 8, 2) if i == t else set(), (8, 8))
            for i in range(4)))
        eps = gap_distance(a.slices[t], b.slices[t])
        if not temporally_metric_near(a, b, eps):
            return f"same-time tracks not mnear at eps={eps}"
    return None


def check_persistence_structure(size, rng):
    nprng = np.random.default_rng(rng.getrandbits(32))
    for _ in range(size):
        n = 6
        v = Video.from_arrays(
            [nprng.choice([0, 128, 255], size=(5, 5)).astype(np.uint8) for _ in range(n)])
        tr = _random_track(rng, 5, 5, n, 0)
        intervals = persistence_diagram(v, [tr])
        covered = set()
        by_bin = {}
        for i in intervals:
            times = set(range(i.birth, i.death + 1))
            if times & covered:
                return "intervals of one track overlap in time"
            covered |= times
            by_bin.setdefault(i.bin, []).append((i.birth, i.death))
        for bin_name, runs in by_bin.items():
            runs.sort()
            for (b1, d1), (b2, d2) in zip(runs, runs[1:]):
                if b2 <= d1 + 1:
                    return f"adjacent runs not merged in bin {bin_name}"
    return None


def check_temporal_continuity_preservation(size, rng):
    from .temporal import check_temporal_continuity

    for _ in range(max(2, size // 2)):
        v = _random_blob_video(rng, 8, 8, 5)
        identity = {(x, y): (x, y) for x in range(8) for y in range(8)}
        verdict = check_temporal_continuity(identity, v, v, EIGHT)
        if not verdict.holds:
            return f"identity not temporally continuous: {verdict.detail}"
        # nearness and disappearance must transfer to image tracks
        masks = [segment(v, t, 0) for t in range(len(v) - 1)]
        tracks = track(v, masks, EIGHT)
        images = {a.id: map_track(identity, a, v.extent) for a in tracks}
        for i, a in enumerate(tracks):
            for b in tracks[i + 1:]:
                if temporally_near(a, b)[0] and \
                        not temporally_near(images[a.id], images[b.id])[0]:
                    return "nearness not preserved by identity"
        for a in tracks:
            t_prime = temporally_video_frame_connected(a, EIGHT)
            if t_prime is not None:
                fa = images[a.id]
                if any(fa.slices[t].cells for t in range(t_prime + 1, len(fa.slices))):
                    return "image track does not disappear with its source"
    return None


# ---------------------------------------------------------------------------
# registry and runner

CHECKS: dict[str, list[tuple[str, Callable]]] = {
    "core": [
        ("adjacency_symmetric", check_adjacency_symmetric),
        ("boundary_equals_chebyshev", check_boundary_equals_chebyshev),
        ("diagonal_implies_boundary", check_diagonal_implies_boundary),
        ("corner_intersection_sizes", check_corner_intersection_sizes),
        ("derivative_zero_iff_constant", check_derivative_zero_iff_constant),
    ],
    "topology": [
        ("discrete_implies_adjacent", check_discrete_implies_adjacent),
        ("components_match_flood_fill", check_components_match_flood_fill),
        ("components_partition", check_components_partition),
        ("continuity_preserves_connectedness", check_continuity_preserves_connectedness),
        ("jordan_rings", check_jordan_rings),
        ("cat_cover", check_cat_cover),
    ],
    "temporal": [
        ("segment_partition", check_segment_partition),
        ("proximity_implications", check_proximity_implications),
        ("same_time_mnear", check_same_time_mnear),
        ("persistence_structure", check_persistence_structure),
        ("temporal_continuity_preservation", check_temporal_continuity_preservation),
    ],
}


def run_checks(suite: str = "all", size: int = 16, seed: int = 0) -> dict:
    """Run the selected invariant suite and return a canonical report document.

    The report's "passed" field is False iff any check produced a
    counterexample.
    """
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    if not 4 <= size <= MAX_CHECK_SIZE:
        raise ValueError(f"size must lie in [4, {MAX_CHECK_SIZE}], got {size}")
    suites = SUITES if suite == "all" else (suite,)

    results = []
    for suite_name in suites:
        for name, fn in CHECKS[suite_name]:
            rng = random.Random(f"{seed}:{suite_name}:{name}")
            counterexample = fn(size, rng)
            results.append({
                "suite": suite_name,
                "check": name,
                "passed": counterexample is None,
                "counterexample": counterexample,
            })

    doc = base_document(
        "check-report",
        sha256_hex(canonical_json({"suite": suite, "size": size, "seed": seed}).encode()))
    doc.update({
        "suite": suite,
        "size": size,
        "seed": seed,
        "results": results,
        "failures": sum(1 for r in results if not r["passed"]),
        "passed": all(r["passed"] for r in results),
    })
    return doc
