"""Level-curve extraction from scalar grids via marching squares."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PlotContext
from .surface import ScalarGrid

# Saddle cells (cases 5 and 10) are disambiguated by the cell-center
# average; the two possible pairings are stored per case.
_CASE_SEGMENTS = {
    0: [],
    1: [("l", "b")],
    2: [("b", "r")],
    3: [("l", "r")],
    4: [("r", "t")],
    6: [("b", "t")],
    7: [("l", "t")],
    8: [("t", "l")],
    9: [("b", "t")],
    11: [("r", "t")],
    12: [("l", "r")],
    13: [("b", "r")],
    14: [("l", "b")],
    15: [],
}
_SADDLE = {
    # case: (pairing when center >= level, pairing otherwise)
    5: ([("b", "r"), ("t", "l")], [("l", "b"), ("r", "t")]),
    10: ([("l", "b"), ("r", "t")], [("b", "r"), ("t", "l")]),
}

_QUANTUM = 1e-12  # chaining tolerance in user units


@dataclass
class ContourPolyline:
    level: float
    vertices: list[tuple[float, float]]
    closed: bool


def choose_levels(grid: ScalarGrid, k: int) -> list[float]:
    """k levels evenly spaced strictly inside the grid's value range."""
    if k < 1:
        raise ValueError("need at least one level")
    zmin = float(grid.z.min())
    zmax = float(grid.z.max())
    if zmax == zmin:
        return []
    return [zmin + (i / (k + 1)) * (zmax - zmin) for i in range(1, k + 1)]


def _validate_levels(levels) -> list[float]:
    levels = [float(v) for v in levels]
    for v in levels:
        if not math.isfinite(v):
            raise ValueError("levels must be finite")
    for a, b in zip(levels, levels[1:]):
        if not a < b:
            raise ValueError("levels must be strictly ascending")
    return levels


def marching_segments(grid: ScalarGrid, level: float):
    """Per-cell contour segments for one level.

    Returns (crossings, segments): crossings maps a grid-edge key
    ("h"|"v", i, j) to its interpolated point; segments are (key_a, key_b)
    pairs, cells visited in row-major order. Values equal to the level are
    nudged up by 1e-12 of the grid range before classification so no
    sample sits exactly on a contour.
    """
    eps = 1e-12 * (float(grid.z.max()) - float(grid.z.min()))
    z = grid.z.copy()
    z[z == level] = level + eps
    xs = grid.xs
    ys = grid.ys
    above = z > level

    crossings: dict[tuple, tuple[float, float]] = {}

    def crossing(key) -> tuple[float, float]:
        pt = crossings.get(key)
        if pt is None:
            kind, i, j = key
            if kind == "h":
                a, b = z[j, i], z[j, i + 1]
                t = (level - a) / (b - a)
                pt = (float(xs[i] + t * (xs[i + 1] - xs[i])), float(ys[j]))
            else:
                a, b = z[j, i], z[j + 1, i]
                t = (level - a) / (b - a)
                pt = (float(xs[i]), float(ys[j] + t * (ys[j + 1] - ys[j])))
            crossings[key] = pt
        return pt

    segments: list[tuple[tuple, tuple]] = []
    for j in range(grid.ny - 1):
        for i in range(grid.nx - 1):
            case = (int(above[j, i]) + 2 * int(above[j, i + 1])
                    + 4 * int(above[j + 1, i + 1]) + 8 * int(above[j + 1, i]))
            if case in _SADDLE:
                center = 0.25 * (z[j, i] + z[j, i + 1] + z[j + 1, i + 1] + z[j + 1, i])
                pairs = _SADDLE[case][0] if center >= level else _SADDLE[case][1]
            else:
                pairs = _CASE_SEGMENTS[case]
            edge_keys = {
                "b": ("h", i, j),
                "t": ("h", i, j + 1),
                "l": ("v", i, j),
                "r": ("v", i + 1, j),
            }
            for ea, eb in pairs:
                ka, kb = edge_keys[ea], edge_keys[eb]
                if crossing(ka) != crossing(kb):
                    segments.append((ka, kb))
    return crossings, segments


def _chain(crossings, segments, level: float) -> list[ContourPolyline]:
    """Greedy chaining of segments into maximal polylines by shared,
    quantized endpoints."""

    def qkey(pt):
        return (round(pt[0] / _QUANTUM), round(pt[1] / _QUANTUM))

    by_end: dict[tuple, list[int]] = {}
    for idx, (ka, kb) in enumerate(segments):
        for key in (ka, kb):
            by_end.setdefault(qkey(crossings[key]), []).append(idx)

    used = [False] * len(segments)
    polylines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        ka, kb = segments[start]
        chain = [crossings[ka], crossings[kb]]

        def extend(tail: bool):
            while True:
                pt = chain[-1] if tail else chain[0]
                nxt = None
                for idx in by_end.get(qkey(pt), ()):
                    if not used[idx]:
                        nxt = idx
                        break
                if nxt is None:
                    return
                used[nxt] = True
                a, b = (crossings[k] for k in segments[nxt])
                other = b if qkey(a) == qkey(pt) else a
                if tail:
                    chain.append(other)
                else:
                    chain.insert(0, other)
                if qkey(chain[0]) == qkey(chain[-1]):
                    return

        extend(tail=True)
        closed = len(chain) > 2 and qkey(chain[0]) == qkey(chain[-1])
        if not closed:
            extend(tail=False)
            closed = len(chain) > 2 and qkey(chain[0]) == qkey(chain[-1])
        if closed:
            chain.pop()
        polylines.append(ContourPolyline(level, chain, closed))
    return polylines


def extract_contours(grid: ScalarGrid, levels) -> list[ContourPolyline]:
    """Marching-squares polylines for each level, chained and closure-marked."""
    out = []
    for level in _validate_levels(levels):
        crossings, segments = marching_segments(grid, level)
        out.extend(_chain(crossings, segments, level))
    return out


def render_contours(polylines, ctx: PlotContext) -> None:
    """Emit polylines; closed ones return to their first vertex."""
    for poly in polylines:
        x0, y0 = poly.vertices[0]
        ctx.plot(x0, y0, 3)
        for x, y in poly.vertices[1:]:
            ctx.plot(x, y, 2)
        if poly.closed:
            ctx.plot(x0, y0, 2)
