import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tdtopo.core import Region, Video
from tdtopo.errors import (
    EmptyDiagram,
    EmptyInput,
    MixedDimensions,
    UnsupportedFormat,
)
from tdtopo.imageio import load_video, read_pgm, save_video, write_pgm
from tdtopo.report import (
    canonical_json,
    interval_payload,
    intervals_document,
    masks_document,
    parse_intervals,
    parse_tracks,
    tracks_document,
    video_digest,
)
from tdtopo.svgplot import render_persistence_svg
from tdtopo.temporal import PersistenceInterval, SegmentationMask, TrackedRegion


class TestPgm:
    def test_round_trip_preserves_every_level(self, tmp_path):
        rng = np.random.default_rng(1)
        arr = rng.integers(0, 256, size=(9, 13)).astype(np.uint8)
        path = tmp_path / "f.pgm"
        write_pgm(arr, path)
        assert np.array_equal(read_pgm(path), arr)

    def test_header_with_comment(self, tmp_path):
        path = tmp_path / "c.pgm"
        path.write_bytes(b"P5\n# a comment\n2 2\n255\n\x00\x01\x02\x03")
        assert read_pgm(path).tolist() == [[0, 1], [2, 3]]

    def test_rejects_ascii_pgm(self, tmp_path):
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P2\n2 2\n255\n0 1 2 3\n")
        with pytest.raises(UnsupportedFormat):
            read_pgm(path)

    def test_rejects_wrong_maxval(self, tmp_path):
        path = tmp_path / "m.pgm"
        path.write_bytes(b"P5\n1 1\n65535\n\x00\x00")
        with pytest.raises(UnsupportedFormat):
            read_pgm(path)

    def test_rejects_truncated_raster(self, tmp_path):
        path = tmp_path / "t.pgm"
        path.write_bytes(b"P5\n4 4\n255\n\x00\x01")
        with pytest.raises(UnsupportedFormat):
            read_pgm(path)


class TestLoadVideo:
    def test_directory_of_frames_in_name_order(self, tmp_path):
        for k in range(4):
            write_pgm(np.full((8, 8), k, np.uint8), tmp_path / f"frame_{k:04d}.pgm")
        video = load_video(tmp_path, fps=2.0)
        assert len(video) == 4
        assert [int(video[k].levels[0, 0]) for k in range(4)] == [0, 1, 2, 3]
        assert video.fps == 2.0

    def test_mixed_dimensions_rejected(self, tmp_path):
        write_pgm(np.zeros((8, 8), np.uint8), tmp_path / "a.pgm")
        write_pgm(np.zeros((4, 4), np.uint8), tmp_path / "b.pgm")
        with pytest.raises(MixedDimensions):
            load_video(tmp_path)

    def test_empty_directory_rejected(self, tmp_path):
        with pytest.raises(EmptyInput):
            load_video(tmp_path)

    def test_missing_path_rejected(self, tmp_path):
        with pytest.raises(EmptyInput):
            load_video(tmp_path / "nowhere")

    def test_grayscale_png(self, tmp_path):
        from PIL import Image

        rng = np.random.default_rng(2)
        arr = rng.integers(0, 256, size=(6, 5)).astype(np.uint8)
        Image.fromarray(arr, mode="L").save(tmp_path / "f.png")
        video = load_video(tmp_path)
        assert np.array_equal(video[0].levels, arr)

    def test_color_png_rejected(self, tmp_path):
        from PIL import Image

        arr = np.zeros((4, 4, 3), np.uint8)
        Image.fromarray(arr, mode="RGB").save(tmp_path / "f.png")
        with pytest.raises(UnsupportedFormat):
            load_video(tmp_path)

    def test_save_then_load_round_trip(self, tmp_path):
        rng = np.random.default_rng(3)
        video = Video.from_arrays(
            [rng.integers(0, 256, size=(7, 7)) for _ in range(3)], fps=4.0)
        save_video(video, tmp_path / "out")
        again = load_video(tmp_path / "out", fps=4.0)
        for a, b in zip(video, again):
            assert np.array_equal(a.levels, b.levels)
        assert video_digest(video) == video_digest(again)


EXTENT = (6, 6)


def mk_track(tid, n, cells_by_t):
    return TrackedRegion(
        tid, tuple(Region(cells_by_t.get(t, set()), EXTENT) for t in range(n)))


class TestReports:
    def test_canonical_json_is_stable(self):
        doc = {"b": 1, "a": [3, 2], "c": {"y": 0.5, "x": None}}
        assert canonical_json(doc) == canonical_json(json.loads(canonical_json(doc)))

    def test_tracks_round_trip(self):
        tracks = [
            mk_track(0, 4, {1: {(1, 1), (2, 1)}, 2: {(2, 2)}}),
            mk_track(3, 4, {0: {(5, 5)}}),
        ]
        doc = tracks_document(tracks, 4, EXTENT, 2.0, "d" * 64)
        doc2 = json.loads(canonical_json(doc))
        parsed, n, extent, fps = parse_tracks(doc2)
        assert n == 4 and extent == EXTENT and fps == 2.0
        assert [t.id for t in parsed] == [0, 3]
        for a, b in zip(tracks, parsed):
            assert tuple(s.cells for s in a.slices) == tuple(s.cells for s in b.slices)
        # and serialization is reproducible
        assert canonical_json(tracks_document(parsed, n, extent, fps, "d" * 64)) == \
            canonical_json(doc)

    def test_never_present_track_serializes_null_lifespan(self):
        doc = tracks_document([mk_track(0, 3, {})], 3, EXTENT, 1.0, "x")
        assert doc["tracks"][0]["birth"] is None
        parsed, _, _, _ = parse_tracks(doc)
        assert parsed[0].present_times() == []

    def test_intervals_round_trip(self):
        intervals = [PersistenceInterval(0, "black", 0, 0, 0.0, 0.0),
                     PersistenceInterval(1, "gray", 1, 3, 0.5, 1.5)]
        doc = intervals_document(intervals, 2.0, "y")
        assert parse_intervals(json.loads(canonical_json(doc))) == intervals
        assert interval_payload(intervals[1])["birth_s"] == 0.5

    def test_masks_document_sorted_cells(self):
        mask = SegmentationMask(0, Region({(2, 1), (0, 0), (1, 0)}, EXTENT))
        doc = masks_document([mask], 2, EXTENT, 1.0, 0, "8", "z")
        assert doc["masks"]["0"]["foreground"] == [[0, 0], [1, 0], [2, 1]]


class TestSvg:
    def test_two_bar_diagram(self):
        intervals = [PersistenceInterval(0, "black", 0, 0, 0.0, 0.0),
                     PersistenceInterval(1, "gray", 1, 3, 1.0, 3.0)]
        svg = render_persistence_svg(intervals, fps=1.0)
        assert svg.count('class="bar"') == 2
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
        bars = [el for el in root.iter() if el.get("class") == "bar"]
        black = next(b for b in bars if b.get("fill") == "#000000")
        gray = next(b for b in bars if b.get("fill") == "#808080")
        # the black bar ends where the gray bar starts
        assert float(black.get("x")) + float(black.get("width")) <= float(gray.get("x")) + 0.11

    def test_single_interval(self):
        svg = render_persistence_svg([PersistenceInterval(0, "white", 2, 5, 2.0, 5.0)])
        assert svg.count('class="bar"') == 1

    def test_empty_rejected(self):
        with pytest.raises(EmptyDiagram):
            render_persistence_svg([])

    def test_random_diagrams_are_well_formed_xml(self):
        import random

        rng = random.Random(5)
        for _ in range(20):
            intervals = []
            for tid in range(rng.randint(1, 4)):
                b = rng.randint(0, 5)
                d = rng.randint(b, 8)
                name = rng.choice(["black", "gray", "white", "dark"])
                intervals.append(PersistenceInterval(tid, name, b, d, b / 2, d / 2))
            ET.fromstring(render_persistence_svg(intervals, fps=2.0))

    def test_deterministic(self):
        intervals = [PersistenceInterval(0, "gray", 0, 4, 0.0, 2.0)]
        assert render_persistence_svg(intervals) == render_persistence_svg(intervals)
