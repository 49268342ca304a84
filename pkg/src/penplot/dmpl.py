"""Parse Hiplot DM/PL plotter programs and translate them to HP-GL.

Supported command subset: `;:` init, `U` pen up, `D` pen down,
`<int>,<int>` absolute move in DMP units, `P<digit>` pen select, `H`
home. Whitespace between commands is insignificant; anything else,
including DM/PL relative-move and velocity commands, is rejected with a
byte offset rather than skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backends import (
    COORD_MAX,
    UNITS_PER_MM,
    HpglDocument,
    PageSetup,
    coalesce_statements,
    frame_document,
)
from .core import Point2
from .errors import DmpParseError, DmpRangeError, MissingInitError, PageOverflowError

# 1 DMP unit = 0.005 inch; 0.001-inch plotters pass dmp_unit_mm=0.0254.
DMP_UNIT_MM = 0.127

INIT = ("INIT",)
PEN_UP = ("UP",)
PEN_DOWN = ("DOWN",)
HOME = ("HOME",)


def move_abs(x: int, y: int) -> tuple:
    return ("MOVE", x, y)


def select_pen(k: int) -> tuple:
    return ("PEN", k)


@dataclass(frozen=True)
class DmpProgram:
    commands: tuple[tuple, ...]
    source_spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.commands or self.commands[0] != INIT:
            raise MissingInitError()
        prev_end = -1
        for start, end in self.source_spans:
            if start < prev_end or end <= start:
                raise ValueError("source spans must be ascending and non-overlapping")
            prev_end = end


_WHITESPACE = " \t\r\n"


def parse_dmp(text: str) -> DmpProgram:
    """Tokenize a DM/PL program; errors carry the byte offset."""
    commands: list[tuple] = []
    spans: list[tuple[int, int]] = []
    i = 0
    n = len(text)

    def read_int(pos: int) -> tuple[int, int]:
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise DmpParseError("expected digit", start)
        return int(text[start:pos]), pos

    while i < n:
        ch = text[i]
        if ch in _WHITESPACE:
            i += 1
            continue
        start = i
        if ch == ";":
            if i + 1 >= n or text[i + 1] != ":":
                raise DmpParseError("expected ':' after ';'", i + 1)
            commands.append(INIT)
            i += 2
        elif ch == "U":
            commands.append(PEN_UP)
            i += 1
        elif ch == "D":
            commands.append(PEN_DOWN)
            i += 1
        elif ch == "H":
            commands.append(HOME)
            i += 1
        elif ch == "P":
            if i + 1 >= n or not text[i + 1].isdigit():
                raise DmpParseError("expected pen digit after 'P'", i + 1)
            pen = int(text[i + 1])
            if not 1 <= pen <= 8:
                raise DmpRangeError(f"pen {pen} outside 1..8", i + 1)
            commands.append(select_pen(pen))
            i += 2
        elif ch.isdigit():
            x, i = read_int(i)
            if i >= n or text[i] != ",":
                raise DmpParseError("expected ',' in coordinate pair", i)
            y, i = read_int(i + 1)
            commands.append(move_abs(x, y))
        else:
            raise DmpParseError(f"unknown byte {ch!r}", i)
        spans.append((start, i))

    if not commands:
        raise MissingInitError()
    if commands[0] != INIT:
        raise MissingInitError(spans[0][0])
    return DmpProgram(tuple(commands), tuple(spans))


def translate(program: DmpProgram, page: PageSetup = PageSetup(),
              dmp_unit_mm: float = DMP_UNIT_MM) -> HpglDocument:
    """HP-GL document for a DM/PL program.

    DMP units scale by dmp_unit_mm * 40 (5.08 for the 0.005-inch
    convention), rounded to the nearest plotter unit. Coordinates must
    stay on the page and within the HP-GL integer range.
    """
    scale = dmp_unit_mm * UNITS_PER_MM
    limit_x = min(COORD_MAX, round(page.width_mm * UNITS_PER_MM))
    limit_y = min(COORD_MAX, round(page.height_mm * UNITS_PER_MM))
    stream: list[tuple[str, object]] = []
    pen_down = False
    for cmd, span in zip(program.commands, program.source_spans):
        tag = cmd[0]
        if tag == "INIT":
            pen_down = False
        elif tag == "UP":
            pen_down = False
        elif tag == "DOWN":
            pen_down = True
        elif tag == "PEN":
            stream.append(("SP", cmd[1]))
        elif tag == "HOME":
            pen_down = False
            stream.append(("PU", (0, 0)))
        else:
            ux = round(cmd[1] * scale)
            uy = round(cmd[2] * scale)
            if ux > limit_x or uy > limit_y:
                raise PageOverflowError(
                    f"move ({cmd[1]},{cmd[2]}) translates to ({ux},{uy}), "
                    f"outside page limits ({limit_x},{limit_y}); "
                    f"source span {span[0]}..{span[1]}"
                )
            stream.append(("PD" if pen_down else "PU", (ux, uy)))
    return frame_document(coalesce_statements(stream))


def trajectory(program: DmpProgram, dmp_unit_mm: float = DMP_UNIT_MM) -> list[list[Point2]]:
    """Interpret the program into pen-down polylines in mm."""
    runs: list[list[Point2]] = []
    current: list[Point2] | None = None
    x = y = 0
    pen_down = False
    for cmd in program.commands:
        tag = cmd[0]
        if tag == "INIT":
            x = y = 0
            pen_down = False
            current = None
        elif tag == "UP":
            pen_down = False
            current = None
        elif tag == "DOWN":
            pen_down = True
        elif tag == "HOME":
            x = y = 0
            pen_down = False
            current = None
        elif tag == "MOVE":
            nx, ny = cmd[1], cmd[2]
            if pen_down:
                if nx == x and ny == y and current is None:
                    runs.append([Point2(nx * dmp_unit_mm, ny * dmp_unit_mm)])
                else:
                    if current is None:
                        current = [Point2(x * dmp_unit_mm, y * dmp_unit_mm)]
                        runs.append(current)
                    current.append(Point2(nx * dmp_unit_mm, ny * dmp_unit_mm))
            else:
                current = None
            x, y = nx, ny
    return runs
