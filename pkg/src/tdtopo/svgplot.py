"""Persistence diagram rendering as SVG 1.1.

One horizontal bar per interval, one row per (track, bin), x-axis in
seconds. A bar spans [birth, death + one frame duration) so single-frame
intervals stay visible. Layout is fully deterministic.
"""

from __future__ import annotations

import os
from typing import Sequence

from .errors import EmptyDiagram
from .temporal import PersistenceInterval

_MARGIN_LEFT = 150.0
_MARGIN_RIGHT = 20.0
_MARGIN_TOP = 24.0
_MARGIN_BOTTOM = 42.0
_ROW_HEIGHT = 26.0
_BAR_HEIGHT = 14.0
_PLOT_WIDTH = 480.0

_BIN_FILLS = {"black": "#000000", "gray": "#808080", "white": "#ffffff"}


def _fill_for(bin_name: str) -> str:
    return _BIN_FILLS.get(bin_name, "#b0b0b0")


def _frame_duration(intervals: Sequence[PersistenceInterval]) -> float:
    for i in intervals:
        if i.birth > 0:
            return i.birth_seconds / i.birth
        if i.death > 0:
            return i.death_seconds / i.death
    return 1.0


def render_persistence_svg(intervals: Sequence[PersistenceInterval],
                           fps: float | None = None) -> str:
    """Render intervals to an SVG string; EmptyDiagram when there are none."""
    if not intervals:
        raise EmptyDiagram("no persistence intervals to draw")
    frame_dur = 1.0 / fps if fps else _frame_duration(intervals)

    rows = sorted({(i.track_id, i.bin) for i in intervals},
                  key=lambda r: (r[0], r[1]))
    row_index = {key: k for k, key in enumerate(rows)}
    total_s = max(i.death_seconds + frame_dur for i in intervals)
    width = _MARGIN_LEFT + _PLOT_WIDTH + _MARGIN_RIGHT
    height = _MARGIN_TOP + len(rows) * _ROW_HEIGHT + _MARGIN_BOTTOM

    def sx(seconds: float) -> float:
        return _MARGIN_LEFT + _PLOT_WIDTH * (seconds / total_s)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect x="0" y="0" width="{width:.0f}" height="{height:.0f}" fill="#fdfdfd"/>',
        f'<text x="{_MARGIN_LEFT:.1f}" y="15" font-family="monospace" '
        f'font-size="12">persistence intervals (seconds)</text>',
    ]

    axis_y = _MARGIN_TOP + len(rows) * _ROW_HEIGHT + 6
    out.append(f'<line x1="{_MARGIN_LEFT:.1f}" y1="{axis_y:.1f}" '
               f'x2="{_MARGIN_LEFT + _PLOT_WIDTH:.1f}" y2="{axis_y:.1f}" '
               f'stroke="#444444" stroke-width="1"/>')
    n_ticks = max(1, round(total_s / frame_dur))
    stride = max(1, (n_ticks + 15) // 16)
    for k in range(0, n_ticks + 1, stride):
        s = k * frame_dur
        x = sx(s)
        out.append(f'<line x1="{x:.1f}" y1="{axis_y:.1f}" x2="{x:.1f}" '
                   f'y2="{axis_y + 4:.1f}" stroke="#444444" stroke-width="1"/>')
        out.append(f'<text x="{x:.1f}" y="{axis_y + 16:.1f}" font-family="monospace" '
                   f'font-size="10" text-anchor="middle">{s:g}</text>')

    for key, k in sorted(row_index.items(), key=lambda kv: kv[1]):
        label_y = _MARGIN_TOP + k * _ROW_HEIGHT + _ROW_HEIGHT / 2 + 4
        out.append(f'<text x="8" y="{label_y:.1f}" font-family="monospace" '
                   f'font-size="11">track {key[0]} / {key[1]}</text>')

    for i in sorted(intervals, key=lambda i: (i.track_id, i.bin, i.birth)):
        k = row_index[(i.track_id, i.bin)]
        x = sx(i.birth_seconds)
        bar_w = sx(i.death_seconds + frame_dur) - x
        y = _MARGIN_TOP + k * _ROW_HEIGHT + (_ROW_HEIGHT - _BAR_HEIGHT) / 2
        out.append(f'<rect class="bar" x="{x:.1f}" y="{y:.1f}" '
                   f'width="{bar_w:.1f}" height="{_BAR_HEIGHT:.1f}" '
                   f'fill="{_fill_for(i.bin)}" stroke="#222222" stroke-width="0.8"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_persistence_svg(intervals: Sequence[PersistenceInterval],
                         path: str | os.PathLike, fps: float | None = None) -> None:
    svg = render_persistence_svg(intervals, fps=fps)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
