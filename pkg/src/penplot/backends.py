"""Serialize display lists to HP-GL (pen plotter) and SVG (screen analog).

HP-GL coordinates are plotter units, 40 per mm, integers in [0, 32767].
Display-list device mm are relative to the drawable origin; the page
margin offsets them onto the physical page.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DisplayList, Point2
from .errors import PageOverflowError

UNITS_PER_MM = 40
COORD_MAX = 32767

# Pens 1..8; the browser viewer uses the identical table.
PEN_COLORS = (
    "#000000",  # 1 black
    "#c81e1e",  # 2 red
    "#1a7f37",  # 3 green
    "#1f5fbf",  # 4 blue
    "#c2620f",  # 5 orange
    "#7a3fbf",  # 6 violet
    "#8a5a2b",  # 7 brown
    "#6e6e6e",  # 8 gray
)

STROKE_WIDTH_MM = 0.35


@dataclass(frozen=True)
class PageSetup:
    """Physical page in mm; the drawable area excludes the margin."""

    width_mm: float = 254.0
    height_mm: float = 190.5
    margin_mm: float = 5.0

    def __post_init__(self):
        if not (self.width_mm > 0 and self.height_mm > 0 and self.margin_mm >= 0):
            raise ValueError("page dimensions must be positive, margin non-negative")
        if self.drawable_width <= 0 or self.drawable_height <= 0:
            raise ValueError("margins leave no drawable area")

    @property
    def drawable_width(self) -> float:
        return self.width_mm - 2 * self.margin_mm

    @property
    def drawable_height(self) -> float:
        return self.height_mm - 2 * self.margin_mm


@dataclass(frozen=True)
class HpglDocument:
    """Statements without trailing semicolons; text forms add them."""

    statements: tuple[str, ...]

    @property
    def text(self) -> str:
        return "".join(s + ";" for s in self.statements)

    def file_text(self) -> str:
        """One statement per line for diffability."""
        return "".join(s + ";\n" for s in self.statements)


def _check_fits(dl: DisplayList, page: PageSetup) -> None:
    x0, y0, x1, y1 = dl.bbox
    if (x0 < 0 or y0 < 0 or x1 > page.drawable_width or y1 > page.drawable_height):
        raise PageOverflowError(
            f"display list bbox ({x0:.3f},{y0:.3f})-({x1:.3f},{y1:.3f}) mm "
            f"exceeds drawable {page.drawable_width:.3f} x {page.drawable_height:.3f} mm"
        )


def _plotter_units(x_mm: float, y_mm: float, page: PageSetup) -> tuple[int, int]:
    ux = round((x_mm + page.margin_mm) * UNITS_PER_MM)
    uy = round((y_mm + page.margin_mm) * UNITS_PER_MM)
    for u in (ux, uy):
        if u < 0 or u > COORD_MAX:
            raise PageOverflowError(f"coordinate {u} outside [0, {COORD_MAX}]")
    return ux, uy


def coalesce_statements(stream) -> list[str]:
    """Render a (verb, payload) stream to statements, merging consecutive
    same-verb PU/PD moves into one comma-separated statement."""
    statements: list[str] = []
    i = 0
    while i < len(stream):
        verb, payload = stream[i]
        if verb == "SP":
            statements.append(f"SP{payload}")
            i += 1
            continue
        coords = [payload]
        while i + 1 < len(stream) and stream[i + 1][0] == verb:
            i += 1
            coords.append(stream[i][1])
        statements.append(verb + ",".join(f"{x},{y}" for x, y in coords))
        i += 1
    return statements


def frame_document(body: list[str]) -> HpglDocument:
    """Wrap body statements in the standard prologue and epilogue."""
    return HpglDocument(("IN", "SP1", *body, "PU", "SP0"))


def emit_hpgl(dl: DisplayList, page: PageSetup = PageSetup()) -> HpglDocument:
    """HP-GL document for *dl*; consecutive same-verb moves coalesce."""
    _check_fits(dl, page)
    stream: list[tuple[str, tuple[int, int]]] = []
    for cmd in dl.commands:
        op = cmd[0]
        if op == "M":
            stream.append(("PU", _plotter_units(cmd[1], cmd[2], page)))
        elif op == "L":
            stream.append(("PD", _plotter_units(cmd[1], cmd[2], page)))
        elif op == "K":
            u = _plotter_units(cmd[1], cmd[2], page)
            stream.append(("PU", u))
            stream.append(("PD", u))
        elif op == "P":
            stream.append(("SP", cmd[1]))
        # frame brackets have no plotter representation
    return frame_document(coalesce_statements(stream))


def hpgl_trajectory(doc: HpglDocument, page: PageSetup = PageSetup()) -> list[list[Point2]]:
    """Interpret an HP-GL document back into pen-down polylines in
    drawable-relative device mm (the margin offset is removed).

    Test oracle for the emitters and the DM/PL translator.
    """
    runs: list[list[Point2]] = []
    current: list[Point2] | None = None
    x = y = 0.0  # plotter units
    pen_down = False

    def to_mm(ux: float, uy: float) -> Point2:
        return Point2(ux / UNITS_PER_MM - page.margin_mm, uy / UNITS_PER_MM - page.margin_mm)

    for raw in doc.text.split(";"):
        stmt = raw.strip()
        if not stmt:
            continue
        verb = stmt[:2].upper()
        body = stmt[2:]
        if verb == "IN":
            x = y = 0.0
            pen_down = False
            current = None
            continue
        if verb == "SP":
            current = None
            continue
        if verb not in ("PU", "PD", "PA"):
            raise ValueError(f"unsupported HP-GL verb in {stmt!r}")
        if verb == "PU":
            pen_down = False
            current = None
        elif verb == "PD":
            pen_down = True
        if not body:
            continue
        values = [int(v) for v in body.split(",")]
        if len(values) % 2:
            raise ValueError(f"odd coordinate count in {stmt!r}")
        for k in range(0, len(values), 2):
            nx, ny = float(values[k]), float(values[k + 1])
            if pen_down:
                if nx == x and ny == y and current is None:
                    runs.append([to_mm(nx, ny)])
                else:
                    if current is None:
                        current = [to_mm(x, y)]
                        runs.append(current)
                    current.append(to_mm(nx, ny))
            else:
                current = None
            x, y = nx, ny
    return runs


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _fmt_mm(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return s if s else "0"


def emit_svg(dl: DisplayList, page: PageSetup = PageSetup()) -> str:
    """Deterministic SVG: one path per pen-continuous polyline, y flipped
    to screen convention, pens mapped through the fixed color table."""
    w = _fmt_mm(page.width_mm)
    h = _fmt_mm(page.height_mm)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}mm" height="{h}mm" '
        f'viewBox="0 0 {w} {h}">',
        f'<g fill="none" stroke-width="{_fmt_mm(STROKE_WIDTH_MM)}" '
        'stroke-linecap="round" stroke-linejoin="round">',
    ]
    pen = 1

    def tx(x: float) -> float:
        return x + page.margin_mm

    def ty(y: float) -> float:
        return page.height_mm - y - page.margin_mm

    path: list[str] = []

    def flush():
        if len(path) > 1:
            lines.append(f'<path stroke="{PEN_COLORS[pen - 1]}" d="{" ".join(path)}"/>')
        path.clear()

    pos = None
    for cmd in dl.commands:
        op = cmd[0]
        if op == "M":
            flush()
            pos = (cmd[1], cmd[2])
        elif op == "L":
            if not path:
                path.append(f"M {_fmt(tx(pos[0]))} {_fmt(ty(pos[1]))}")
            path.append(f"L {_fmt(tx(cmd[1]))} {_fmt(ty(cmd[2]))}")
            pos = (cmd[1], cmd[2])
        elif op == "K":
            flush()
            lines.append(
                f'<circle cx="{_fmt(tx(cmd[1]))}" cy="{_fmt(ty(cmd[2]))}" '
                f'r="{_fmt(STROKE_WIDTH_MM / 2)}" stroke="none" '
                f'fill="{PEN_COLORS[pen - 1]}"/>'
            )
            pos = (cmd[1], cmd[2])
        elif op == "P":
            flush()
            pen = cmd[1]
        elif op in ("B", "E"):
            flush()
            pos = None
    flush()
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
