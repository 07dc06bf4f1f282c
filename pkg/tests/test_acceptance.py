"""Acceptance suite.

One test per criterion; each prints a `[PASS] criterion N` line when it
holds (run with -s to see them). Sizes, counts, and tolerances are pinned
here and must not be loosened.
"""

import random
import time

import numpy as np

from oracles import (
    flood_fill_components,
    minimal_value_constant_cover_size,
    random_connected_cells,
    random_continuous_map,
    random_region_cells,
    random_ring,
    random_track_cells,
)
from tdtopo.checks import run_checks
from tdtopo.cli import main as cli_main
from tdtopo.core import Frame, Region, Video, chebyshev, voxels_adjacent
from tdtopo.scenes import generate_scene, preset_scene
from tdtopo.svgplot import render_persistence_svg
from tdtopo.temporal import (
    TrackedRegion,
    check_temporal_continuity,
    lifespans_overlap,
    map_track,
    persistence_diagram,
    segment,
    temporally_metric_near,
    temporally_near,
    temporally_video_frame_connected,
    track,
)
from tdtopo.topology import (
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


def _passed(number, message):
    print(f"[PASS] criterion {number}: {message}")


def test_criterion_1_adjacency_equivalence_exhaustive():
    cells = [(x, y) for x in range(16) for y in range(16)]
    start = time.perf_counter()
    discrepancies = 0
    checked = 0
    for p in cells:
        for q in cells:
            if p == q:
                continue
            checked += 1
            if voxels_adjacent(p, q, "boundary") != (chebyshev(p, q) == 1):
                discrepancies += 1
    elapsed = time.perf_counter() - start
    assert checked == 65280
    assert discrepancies == 0
    assert elapsed < 1.0, f"exhaustive 16x16 equivalence took {elapsed:.2f}s"
    _passed(1, f"boundary adjacency == Chebyshev-1 on 65,280 pairs in {elapsed:.2f}s")


def test_criterion_2_component_oracle_500_masks():
    rng = random.Random(2024)
    for i in range(500):
        cells = random_region_cells(rng, 12, 12, rng.randint(1, 60))
        r = Region(cells, (12, 12))
        for scheme, name in ((FOUR, "4"), (EIGHT, "8")):
            got = {p.cells for p in connected_components(r, scheme)}
            want = flood_fill_components(cells, name)
            assert got == want, f"mask {i}, scheme {name}"
    _passed(2, "connected_components == flood-fill oracle on 500 masks, both schemes")


def test_criterion_3_continuity_preserves_connectedness():
    rng = random.Random(3)
    failures = 0
    for i in range(200):
        mapping, codomain = random_continuous_map(rng, 8, 8)
        scheme, name = (FOUR, "4") if i % 2 else (EIGHT, "8")
        assert check_kappa_continuity(mapping, (8, 8), codomain, scheme).holds
        for _ in range(100):
            cells = random_connected_cells(rng, 8, 8, rng.randint(1, 12), name)
            image = Region({mapping[c] for c in cells}, codomain)
            if not is_connected(image, scheme):
                failures += 1
    assert failures == 0
    _passed(3, "images of 200x100 connected regions under continuous maps stay connected")


def test_criterion_4_digital_jordan_rings():
    rng = random.Random(4)
    for i in range(100):
        grid = 16 if i % 2 == 0 else 32
        verts, analytic = random_ring(rng, grid, grid, allow_bumps=(i % 4 >= 2))
        interior, exterior = jordan_partition(OneCycle(verts), (grid, grid))
        assert len(interior) == analytic, f"ring {i}: {len(interior)} != {analytic}"
        assert not interior.cells & exterior.cells
        assert interior.cells | exterior.cells | set(verts) == \
            {(x, y) for x in range(grid) for y in range(grid)}
    _passed(4, "100 rings on 16x16/32x32 split with analytic interior counts")


def test_criterion_5_proximity_implication_lattice():
    rng = random.Random(5)
    n_frames = 6
    for i in range(300):
        a = TrackedRegion(0, tuple(
            Region(c, (8, 8)) for c in _slices(rng, n_frames)))
        b = TrackedRegion(1, tuple(
            Region(c, (8, 8)) for c in _slices(rng, n_frames)))
        tnear, witness = temporally_near(a, b)
        for eps in (0, 1, 2):
            if tnear:
                assert temporally_metric_near(a, b, eps), f"scene {i}, eps {eps}"
        assert temporally_metric_near(a, b, 0) == tnear, f"scene {i}"
        if tnear:
            assert lifespans_overlap(a, b), f"scene {i}"
        # discrete proximity implies adjacency on the per-frame slices
        for t in range(n_frames):
            sa, sb = a.slices[t], b.slices[t]
            if sa.cells and sb.cells and near_discrete(sa, sb):
                assert subimages_adjacent(sa, sb, FOUR)
                assert subimages_adjacent(sa, sb, EIGHT)
    _passed(5, "tnear/mnear/lifespan/adjacency implications hold on 300 scenes")


def _slices(rng, n_frames):
    cells_by_t = random_track_cells(rng, 8, 8, n_frames)
    return [cells_by_t.get(t, set()) for t in range(n_frames)]


def test_criterion_6_segmentation_matches_generator_truth():
    video, truth = generate_scene(preset_scene("moving-square"))
    assert len(video) == 8 and video.extent == (64, 64)
    for t in range(len(video) - 1):
        got = segment(video, t, tol=0).foreground.cells
        assert got == truth.change_masks[t], f"frame pair {t}"
    _passed(6, "segment(tol=0) equals the analytic change mask on all 7 frame pairs")


def test_criterion_7_fig4_reconstruction():
    video, truth = generate_scene(preset_scene("fig4", fps=2.5))
    intervals = persistence_diagram(video, truth.tracks)
    facts = [(i.track_id, i.bin, i.birth, i.death) for i in intervals]
    assert facts == [(0, "black", 0, 0), (1, "gray", 1, 3)]
    assert intervals[0].birth_seconds == 0.0
    assert intervals[0].death_seconds == 0.0
    assert intervals[1].birth_seconds == 1 / 2.5
    assert intervals[1].death_seconds == 3 / 2.5
    svg = render_persistence_svg(intervals, fps=video.fps)
    assert svg.count('class="bar"') == 2
    _passed(7, "fig4 yields black@frame0 and gray@frames1-3; SVG has exactly two bars")


def _random_blob_video(rng, width, height, n_frames, n_blobs):
    blobs = []
    for _ in range(n_blobs):
        side = rng.randint(2, 3)
        blobs.append([rng.randrange(width - side), rng.randrange(height - side),
                      side, rng.randint(80, 255)])
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


def test_criterion_8_temporal_continuity_preservation():
    rng = random.Random(8)
    identity = {(x, y): (x, y) for x in range(8) for y in range(8)}
    translation = {(x, y): (x + 2, y + 1) for x in range(8) for y in range(8)}

    for i in range(30):
        video = _random_blob_video(rng, 8, 8, 5, rng.randint(1, 2))
        y_same = video
        y_shifted = Video.from_arrays([np.zeros((9, 10), np.uint8)] * len(video))
        assert check_temporal_continuity(identity, video, y_same, EIGHT).holds
        assert check_temporal_continuity(translation, video, y_shifted, EIGHT).holds

        # nearness and disappearance transfer to images under passing maps
        masks = [segment(video, t, 0) for t in range(len(video) - 1)]
        tracks = track(video, masks, EIGHT)
        for mapping, extent in ((identity, (8, 8)), (translation, (10, 9))):
            images = {a.id: map_track(mapping, a, extent) for a in tracks}
            for j, a in enumerate(tracks):
                for b in tracks[j + 1:]:
                    if temporally_near(a, b)[0]:
                        assert temporally_near(images[a.id], images[b.id])[0]
            for a in tracks:
                t_prime = temporally_video_frame_connected(a, EIGHT)
                if t_prime is not None:
                    fa = images[a.id]
                    assert all(not fa.slices[t].cells
                               for t in range(t_prime + 1, len(fa.slices)))

    # a horizontal dilation separates touching tracks: detected with a witness
    a = TrackedRegion(0, tuple(Region({(3, 3)}, (8, 8)) for _ in range(4)))
    b = TrackedRegion(1, tuple(Region({(4, 3)}, (8, 8)) for _ in range(4)))
    x_video = Video.from_arrays([np.zeros((8, 8), np.uint8)] * 4)
    y_video = Video.from_arrays([np.zeros((8, 16), np.uint8)] * 4)
    dilation = {(px, py): (2 * px, py) for px in range(8) for py in range(8)}
    verdict = check_temporal_continuity(dilation, x_video, y_video, EIGHT,
                                        tracks=[a, b])
    assert not verdict.holds
    assert verdict.witness == (a, b)
    _passed(8, "identity/translation preserve nearness+disappearance; dilation detected")


def test_criterion_9_cat_number_exhaustive_cover():
    rng = random.Random(9)
    for i in range(200):
        palette = rng.sample([0, 64, 128, 200, 255], rng.randint(2, 3))
        levels = [[rng.choice(palette) for _ in range(6)] for _ in range(6)]
        frame = Frame.from_rows(levels)
        cells = random_region_cells(rng, 6, 6, rng.randint(1, 9))
        count, _ = cat_number(Region(cells, (6, 6)), frame, EIGHT)
        oracle = minimal_value_constant_cover_size(
            cells, lambda c: levels[c[1]][c[0]], "8")
        assert count == oracle, f"frame {i}: {count} != {oracle}"
    _passed(9, "cat_number equals exhaustive minimal cover on 200 frames")


def test_criterion_10_performance_envelope(tmp_path, capsys):
    scene_dir = tmp_path / "scene100"
    rc = cli_main(["generate", "--scene", "moving-square", "--frames", "100",
                   "--out", str(scene_dir)])
    assert rc == 0
    capsys.readouterr()

    # wall time of the three pipeline commands, in-process (the envelope
    # targets the tool's work; interpreter boot is excluded)
    tracks_path = tmp_path / "tracks.json"
    start = time.perf_counter()
    assert cli_main(["segment", str(scene_dir)]) == 0
    assert cli_main(["track", str(scene_dir), "--out", str(tracks_path)]) == 0
    assert cli_main(["persistence", str(scene_dir)]) == 0
    pipeline_s = time.perf_counter() - start
    capsys.readouterr()
    assert pipeline_s < 1.0, f"segment+track+persistence took {pipeline_s:.2f}s"

    start = time.perf_counter()
    doc = run_checks(suite="all", size=16, seed=0)
    checks_s = time.perf_counter() - start
    assert doc["passed"] is True
    assert checks_s < 30.0, f"check suite size=16 took {checks_s:.2f}s"
    _passed(10, f"pipeline {pipeline_s:.2f}s < 1s; checks(size=16) {checks_s:.2f}s < 30s")
