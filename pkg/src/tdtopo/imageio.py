"""Frame ingestion and emission: binary PGM (P5) as the canonical bit-exact
format, grayscale PNG accepted for convenience.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .core import Video
from .errors import EmptyInput, UnsupportedFormat

_SUFFIXES = (".pgm", ".png")


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    """Read a binary 8-bit PGM (P5, maxval 255) into a (height, width) array."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise UnsupportedFormat(f"{path}: not a binary PGM (P5) file")

    # header tokens: magic, width, height, maxval; '#' starts a comment
    pos = 2
    tokens = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise UnsupportedFormat(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte separates header from raster
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise UnsupportedFormat(f"{path}: malformed PGM header")
    if maxval != 255:
        raise UnsupportedFormat(f"{path}: PGM maxval must be 255, got {maxval}")
    raster = data[pos:pos + width * height]
    if len(raster) != width * height:
        raise UnsupportedFormat(f"{path}: PGM raster truncated")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(levels: np.ndarray, path: str | os.PathLike) -> None:
    """Write a (height, width) uint8 array as binary PGM (P5, maxval 255)."""
    arr = np.ascontiguousarray(levels, dtype=np.uint8)
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(arr.tobytes())


def read_png(path: str | os.PathLike) -> np.ndarray:
    from PIL import Image  # deferred: only PNG input needs Pillow

    with Image.open(path) as img:
        if img.mode != "L":
            raise UnsupportedFormat(
                f"{path}: PNG mode {img.mode!r} is not 8-bit grayscale ('L')")
        return np.asarray(img, dtype=np.uint8).copy()


def _read_frame(path: Path) -> np.ndarray:
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return read_pgm(path)
    if suffix == ".png":
        return read_png(path)
    raise UnsupportedFormat(f"{path}: unsupported format {suffix!r}")


def load_video(path: str | os.PathLike, fps: float = 1.0) -> Video:
    """Load a video from a frame file or a directory of frame files.

    Directory entries are taken in lexicographic order as time order; all
    frames must share dimensions.
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.iterdir()
                       if p.is_file() and p.suffix.lower() in _SUFFIXES)
        if not files:
            raise EmptyInput(f"no .pgm or .png frames in {path}")
    elif path.is_file():
        files = [path]
    else:
        raise EmptyInput(f"{path}: no such file or directory")
    return Video.from_arrays([_read_frame(p) for p in files], fps=fps)


def save_video(video: Video, directory: str | os.PathLike, stem: str = "frame") -> list[Path]:
    """Write every frame as PGM into directory (created if needed)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, frame in enumerate(video):
        p = directory / f"{stem}_{k:04d}.pgm"
        write_pgm(frame.levels, p)
        paths.append(p)
    return paths
