"""Command-line interface.

Subcommands mirror the library operations one-to-one; all JSON output is
canonical (byte-identical for identical inputs and flags). Exit codes:
0 success, 1 check-suite failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .checks import MAX_CHECK_SIZE, run_checks
from .errors import TdtError
from .imageio import load_video, save_video
from .report import (
    base_document,
    canonical_json,
    cells_payload,
    intervals_document,
    masks_document,
    parse_tracks,
    relations_document,
    sha256_hex,
    tracks_document,
    video_digest,
)
from .scenes import PRESETS, generate_scene, preset_scene
from .svgplot import emit_persistence_svg
from .temporal import (
    lifespans_overlap,
    parse_bins,
    persistence_diagram,
    segment,
    temporally_metric_near,
    temporally_near,
    track,
)
from .topology import AdjacencyScheme, OneCycle, jordan_partition


def _emit(doc: dict, out: str | None) -> None:
    text = canonical_json(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TdtError(f"{path}: not valid JSON ({exc})")


def _segment_all(video, tol):
    return [segment(video, t, tol) for t in range(len(video) - 1)]


def cmd_ingest(args) -> int:
    video = load_video(args.frames, fps=args.fps)
    doc = base_document("video", video_digest(video))
    doc.update({
        "frames": len(video),
        "fps": video.fps,
        "extent": [video.extent[0], video.extent[1]],
    })
    _emit(doc, args.out)
    return 0


def cmd_generate(args) -> int:
    spec = preset_scene(args.scene, frames=args.frames, width=args.width,
                        height=args.height, fps=args.fps)
    video, truth = generate_scene(spec)
    out_dir = Path(args.out)
    save_video(video, out_dir)
    digest = video_digest(video)
    truth_doc = tracks_document(truth.tracks, len(video), video.extent, video.fps, digest)
    truth_doc["kind"] = "truth"
    truth_doc["masks"] = {str(t): cells_payload(cells)
                          for t, cells in enumerate(truth.change_masks)}
    truth_path = out_dir / "truth.json"
    truth_path.write_text(canonical_json(truth_doc), encoding="utf-8")

    doc = base_document("generated", digest)
    doc.update({
        "scene": args.scene,
        "frames": len(video),
        "fps": video.fps,
        "extent": [video.extent[0], video.extent[1]],
        "out": str(out_dir),
        "truth": str(truth_path),
    })
    _emit(doc, None)
    return 0


def cmd_segment(args) -> int:
    video = load_video(args.frames, fps=args.fps)
    masks = _segment_all(video, args.tol)
    doc = masks_document(masks, len(video), video.extent, video.fps,
                         args.tol, args.scheme, video_digest(video))
    _emit(doc, args.out)
    return 0


def cmd_track(args) -> int:
    video = load_video(args.frames, fps=args.fps)
    scheme = AdjacencyScheme.parse(args.scheme)
    tracks = track(video, _segment_all(video, args.tol), scheme)
    n_frames = max(len(video) - 1, 0)
    doc = tracks_document(tracks, n_frames, video.extent, video.fps, video_digest(video))
    doc.update({"tol": args.tol, "scheme": args.scheme})
    _emit(doc, args.out)
    return 0


def cmd_proximity(args) -> int:
    doc_in = _load_json(args.tracks)
    tracks, _, _, _ = parse_tracks(doc_in)
    by_id = {t.id: t for t in tracks}
    if (args.a is None) != (args.b is None):
        raise TdtError("--a and --b must be given together")
    if args.a is not None:
        if args.a not in by_id or args.b not in by_id:
            raise TdtError(f"track ids {args.a}, {args.b} not both present")
        pairs = [(by_id[args.a], by_id[args.b])]
    else:
        pairs = [(tracks[i], tracks[j])
                 for i in range(len(tracks)) for j in range(i + 1, len(tracks))]

    relations = []
    for a, b in pairs:
        entry = {"kind": args.kind, "a": a.id, "b": b.id}
        if args.kind == "tnear":
            holds, witness = temporally_near(a, b)
            entry["holds"] = holds
            entry["witness"] = sorted(witness)
        elif args.kind == "mnear":
            entry["eps"] = args.eps
            entry["holds"] = temporally_metric_near(a, b, args.eps)
        else:  # dnear: overlapping lifespans
            entry["holds"] = lifespans_overlap(a, b)
        relations.append(entry)
    _emit(relations_document(relations, doc_in.get("input_digest", "")), args.out)
    return 0


def cmd_persistence(args) -> int:
    video = load_video(args.frames, fps=args.fps)
    if args.tracks:
        tracks, _, extent, _ = parse_tracks(_load_json(args.tracks))
        if extent != video.extent:
            raise TdtError(f"tracks extent {extent} does not match video {video.extent}")
    else:
        scheme = AdjacencyScheme.parse(args.scheme)
        tracks = track(video, _segment_all(video, args.tol), scheme)
    bins = parse_bins(args.bins)
    intervals = persistence_diagram(video, tracks, bins)
    doc = intervals_document(intervals, video.fps, video_digest(video))
    _emit(doc, args.json)
    if args.svg:
        emit_persistence_svg(intervals, args.svg, fps=video.fps)
    return 0


def cmd_jordan(args) -> int:
    doc_in = _load_json(args.cycle)
    try:
        vertices = [(int(x), int(y)) for x, y in doc_in["vertices"]]
        extent = (int(doc_in["extent"][0]), int(doc_in["extent"][1]))
    except (KeyError, TypeError, ValueError):
        raise TdtError(f"{args.cycle}: expected {{\"vertices\": [[x,y],...],"
                       f" \"extent\": [w,h]}}")
    interior, exterior = jordan_partition(OneCycle(vertices), extent)
    doc = base_document(
        "jordan", sha256_hex(canonical_json(doc_in).encode()))
    doc.update({
        "extent": [extent[0], extent[1]],
        "vertices": [[x, y] for x, y in vertices],
        "interior": cells_payload(interior.cells),
        "exterior": cells_payload(exterior.cells),
    })
    _emit(doc, args.out)
    return 0


def cmd_check(args) -> int:
    doc = run_checks(suite=args.suite, size=args.size, seed=args.seed)
    _emit(doc, args.out)
    if not doc["passed"]:
        for r in doc["results"]:
            if not r["passed"]:
                print(f"FAIL {r['suite']}:{r['check']}: {r['counterexample']}",
                      file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdt",
        description="Temporal digital topology over video frame sequences.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_frames_opts(p, with_scheme=True):
        p.add_argument("frames", help="frame file or directory of .pgm/.png frames")
        p.add_argument("--fps", type=float, default=1.0, help="frames per second")
        p.add_argument("--tol", type=int, default=0,
                       help="derivative-change tolerance in quantized units")
        if with_scheme:
            p.add_argument("--scheme", choices=("4", "8"), default="8",
                           help="lattice adjacency scheme")

    p = sub.add_parser("ingest", help="load frames and report video metadata")
    p.add_argument("frames")
    p.add_argument("--fps", type=float, default=1.0)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("generate", help="render a built-in scene with ground truth")
    p.add_argument("--scene", choices=PRESETS, required=True)
    p.add_argument("--frames", type=int, help="frame count override")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--fps", type=float)
    p.add_argument("--out", required=True, help="output directory for PGM frames + truth.json")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("segment", help="foreground/background masks per frame pair")
    add_frames_opts(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_segment)

    p = sub.add_parser("track", help="segment and link foreground components")
    add_frames_opts(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_track)

    p = sub.add_parser("proximity", help="temporal proximity relations between tracks")
    p.add_argument("tracks", help="tracks JSON (from 'tdt track' or truth.json)")
    p.add_argument("--kind", choices=("tnear", "mnear", "dnear"), required=True)
    p.add_argument("--eps", type=float, default=0.0, help="gap bound for mnear")
    p.add_argument("--a", type=int, help="first track id (default: all pairs)")
    p.add_argument("--b", type=int, help="second track id")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_proximity)

    p = sub.add_parser("persistence", help="value-bin persistence intervals")
    add_frames_opts(p)
    p.add_argument("--tracks", help="tracks JSON; default: segment+track pipeline")
    p.add_argument("--bins", default="black,gray,white",
                   help="comma-separated bins: black,gray,white or name=lo:hi")
    p.add_argument("--json", help="write intervals JSON here instead of stdout")
    p.add_argument("--svg", help="also render the diagram as SVG")
    p.set_defaults(fn=cmd_persistence)

    p = sub.add_parser("jordan", help="interior/exterior of a simple cycle")
    p.add_argument("cycle", help='JSON file: {"vertices": [[x,y],...], "extent": [w,h]}')
    p.add_argument("--out")
    p.set_defaults(fn=cmd_jordan)

    p = sub.add_parser("check", help="run the invariant check suites")
    p.add_argument("--suite", choices=("core", "topology", "temporal", "all"),
                   default="all")
    p.add_argument("--size", type=int, default=16,
                   help=f"problem size, 4..{MAX_CHECK_SIZE}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (TdtError, ValueError, OSError) as exc:
        print(f"tdt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
