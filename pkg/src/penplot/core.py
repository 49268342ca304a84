"""Device-independent pen-drawing kernel.

The kernel accumulates a DisplayList: an ordered sequence of drawing
commands in device millimeters, already clipped to the device rectangle.
Backends serialize that list; renderers emit into it through the classic
pen interface (`plot` with a pen code).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import (
    InvalidCoordinateError,
    InvalidFactorError,
    InvalidPenCodeError,
    InvalidWindowError,
    SealedContextError,
)


class Point2(NamedTuple):
    x: float
    y: float


# Display-list opcodes: ("M", x, y) move, ("L", x, y) draw, ("K", x, y)
# marker dot, ("P", k) pen select, ("B", name) / ("E",) frame brackets.
Command = tuple

PEN_UP = 3
PEN_DOWN = 2

# Default logical page: A-size drawable, in mm.
DEVICE_WIDTH_MM = 244.0
DEVICE_HEIGHT_MM = 180.5


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class Window:
    """Maps a user-unit rectangle onto a device rectangle (mm)."""

    user_min: Point2
    user_max: Point2
    device_min: Point2
    device_max: Point2

    def __post_init__(self):
        pts = (*self.user_min, *self.user_max, *self.device_min, *self.device_max)
        if not _finite(*pts):
            raise InvalidWindowError("window coordinates must be finite")
        if not (self.user_max.x > self.user_min.x and self.user_max.y > self.user_min.y):
            raise InvalidWindowError("user rectangle must have positive extent")
        if not (self.device_max.x > self.device_min.x and self.device_max.y > self.device_min.y):
            raise InvalidWindowError("device rectangle must have positive area")

    @property
    def device_rect(self) -> tuple[float, float, float, float]:
        return (self.device_min.x, self.device_min.y, self.device_max.x, self.device_max.y)


def identity_window(size: float = 1000.0) -> Window:
    """A window mapping user units 1:1 onto device mm, origin shared."""
    return Window(Point2(0.0, 0.0), Point2(size, size), Point2(0.0, 0.0), Point2(size, size))


def fit_window(
    user_bbox: tuple[float, float, float, float],
    device_rect: tuple[float, float, float, float] = (0.0, 0.0, DEVICE_WIDTH_MM, DEVICE_HEIGHT_MM),
    pad_fraction: float = 0.025,
) -> Window:
    """Window for *user_bbox* centered in *device_rect* with uniform scale.

    The user rectangle is padded, then widened on its short side to match
    the device aspect ratio so geometry is never distorted.
    """
    x0, y0, x1, y1 = user_bbox
    dx0, dy0, dx1, dy1 = device_rect
    span_x = x1 - x0
    span_y = y1 - y0
    longest = max(span_x, span_y)
    if longest <= 0.0:
        longest = 1.0
    pad = pad_fraction * longest
    x0, x1 = x0 - pad, x1 + pad
    y0, y1 = y0 - pad, y1 + pad
    span_x, span_y = x1 - x0, y1 - y0

    dev_w, dev_h = dx1 - dx0, dy1 - dy0
    # Grow the user rect (about its center) until it has the device aspect.
    if span_x * dev_h >= span_y * dev_w:
        need_y = span_x * dev_h / dev_w
        cy = 0.5 * (y0 + y1)
        y0, y1 = cy - need_y / 2.0, cy + need_y / 2.0
    else:
        need_x = span_y * dev_w / dev_h
        cx = 0.5 * (x0 + x1)
        x0, x1 = cx - need_x / 2.0, cx + need_x / 2.0
    return Window(Point2(x0, y0), Point2(x1, y1), Point2(dx0, dy0), Point2(dx1, dy1))


def user_to_device(window: Window, factor: float, origin: Point2, p: Point2) -> Point2:
    """Affine user-to-device map.

    The effective user point is origin + factor*p (scaling acts about the
    current user origin); that point is then mapped linearly from the
    window's user rectangle onto its device rectangle.
    """
    ex = origin.x + factor * p.x
    ey = origin.y + factor * p.y
    ux0, uy0 = window.user_min
    ux1, uy1 = window.user_max
    dx0, dy0 = window.device_min
    dx1, dy1 = window.device_max
    return Point2(
        dx0 + (ex - ux0) / (ux1 - ux0) * (dx1 - dx0),
        dy0 + (ey - uy0) / (uy1 - uy0) * (dy1 - dy0),
    )


_LEFT, _RIGHT, _BOTTOM, _TOP = 1, 2, 4, 8


def _outcode(x: float, y: float, rect: tuple[float, float, float, float]) -> int:
    xmin, ymin, xmax, ymax = rect
    code = 0
    if x < xmin:
        code |= _LEFT
    elif x > xmax:
        code |= _RIGHT
    if y < ymin:
        code |= _BOTTOM
    elif y > ymax:
        code |= _TOP
    return code


def clip_segment(
    a: Point2, b: Point2, rect: tuple[float, float, float, float]
) -> Optional[tuple[Point2, Point2]]:
    """Cohen-Sutherland clip of segment ab against *rect*.

    Returns the inside sub-segment or None; points on the boundary count
    as inside. A segment already inside is returned unchanged (exactly).
    """
    xmin, ymin, xmax, ymax = rect
    x0, y0 = a
    x1, y1 = b
    code0 = _outcode(x0, y0, rect)
    code1 = _outcode(x1, y1, rect)
    # Each of the four boundaries is crossed at most once.
    for _ in range(5):
        if code0 == 0 and code1 == 0:
            return Point2(x0, y0), Point2(x1, y1)
        if code0 & code1:
            return None
        out = code0 if code0 else code1
        if out & _TOP:
            x = x0 + (x1 - x0) * (ymax - y0) / (y1 - y0)
            y = ymax
        elif out & _BOTTOM:
            x = x0 + (x1 - x0) * (ymin - y0) / (y1 - y0)
            y = ymin
        elif out & _RIGHT:
            y = y0 + (y1 - y0) * (xmax - x0) / (x1 - x0)
            x = xmax
        else:
            y = y0 + (y1 - y0) * (xmin - x0) / (x1 - x0)
            x = xmin
        if out == code0:
            x0, y0 = x, y
            code0 = _outcode(x0, y0, rect)
        else:
            x1, y1 = x, y
            code1 = _outcode(x1, y1, rect)
    return None


@dataclass(frozen=True)
class DisplayList:
    """Sealed sequence of drawing commands plus its bounding box (mm)."""

    commands: tuple[Command, ...]
    bbox: tuple[float, float, float, float]

    def __iter__(self):
        return iter(self.commands)

    def __len__(self):
        return len(self.commands)


def compute_bbox(commands) -> tuple[float, float, float, float]:
    """Bounds over all coordinates; (0, 0, 0, 0) for a coordinate-free list."""
    xs, ys = [], []
    for cmd in commands:
        if cmd[0] in ("M", "L", "K"):
            xs.append(cmd[1])
            ys.append(cmd[2])
    if not xs:
        return (0.0, 0.0, 0.0, 0.0)
    return (min(xs), min(ys), max(xs), max(ys))


def validate_display_list(dl: DisplayList) -> None:
    """Raise ValueError unless *dl* satisfies the display-list invariants."""
    depth = 0
    have_position = False
    x0, y0, x1, y1 = dl.bbox
    for i, cmd in enumerate(dl.commands):
        op = cmd[0]
        if op == "B":
            if depth != 0:
                raise ValueError(f"command {i}: frames may not nest")
            depth = 1
            have_position = False
        elif op == "E":
            if depth != 1:
                raise ValueError(f"command {i}: unbalanced frame end")
            depth = 0
            have_position = False
        elif op in ("M", "L", "K"):
            x, y = cmd[1], cmd[2]
            if not _finite(x, y):
                raise ValueError(f"command {i}: non-finite coordinate")
            if not (x0 <= x <= x1 and y0 <= y <= y1):
                raise ValueError(f"command {i}: coordinate outside bbox")
            if op == "L":
                if not have_position:
                    raise ValueError(f"command {i}: LineTo without a preceding position")
            have_position = op in ("M", "L")
        elif op == "P":
            k = cmd[1]
            if not (isinstance(k, int) and 1 <= k <= 8):
                raise ValueError(f"command {i}: pen id {k!r} outside 1..8")
        else:
            raise ValueError(f"command {i}: unknown opcode {op!r}")
    if depth != 0:
        raise ValueError("unterminated frame")


class PlotContext:
    """Classic global-state pen context: window, factor, origin, pen position.

    Single-owner; not safe for concurrent mutation. `finalize` seals the
    context and returns the immutable DisplayList.
    """

    def __init__(self, window: Window):
        self.window = window
        self.global_factor = 1.0
        self.origin_offset = Point2(0.0, 0.0)
        self.pen_position = Point2(0.0, 0.0)  # user units, pre-factor
        self.pen_down = False
        self._device_pos = user_to_device(window, 1.0, Point2(0.0, 0.0), Point2(0.0, 0.0))
        self._commands: list[Command] = []
        self._sealed = False
        self._frame_open = False
        # Last emitted position-bearing command kind and point, if any.
        self._last_emit: Optional[tuple[str, Point2]] = None

    def _check_open(self):
        if self._sealed:
            raise SealedContextError("context already finalized")

    def _emit(self, cmd: Command):
        self._commands.append(cmd)
        if cmd[0] in ("M", "L", "K"):
            self._last_emit = (cmd[0], Point2(cmd[1], cmd[2]))

    def _clamp(self, p: Point2) -> Point2:
        xmin, ymin, xmax, ymax = self.window.device_rect
        return Point2(min(max(p.x, xmin), xmax), min(max(p.y, ymin), ymax))

    def plot(self, x: float, y: float, pen: int) -> None:
        """Move (pen 3) or draw (pen 2) to user point (x, y).

        A negative code performs the move/draw, then makes (x, y) the new
        user origin. Draws are clipped to the device rectangle; a
        zero-length draw becomes a marker dot.
        """
        self._check_open()
        if not isinstance(pen, int) or abs(pen) not in (PEN_DOWN, PEN_UP):
            raise InvalidPenCodeError(f"pen code {pen!r} not in {{2, 3, -2, -3}}")
        if not _finite(x, y):
            raise InvalidCoordinateError(f"non-finite coordinate ({x!r}, {y!r})")
        target = user_to_device(self.window, self.global_factor, self.origin_offset, Point2(x, y))
        if abs(pen) == PEN_UP:
            self.pen_down = False
            self._emit(("M", *self._clamp(target)))
        else:
            self.pen_down = True
            clipped = clip_segment(self._device_pos, target, self.window.device_rect)
            if clipped is not None:
                p, q = clipped
                if p == q:
                    self._emit(("K", p.x, p.y))
                else:
                    if self._last_emit is None or self._last_emit[0] not in ("M", "L") or self._last_emit[1] != p:
                        self._emit(("M", p.x, p.y))
                    self._emit(("L", q.x, q.y))
        self._device_pos = target
        self.pen_position = Point2(x, y)
        if pen < 0:
            self.origin_offset = Point2(
                self.origin_offset.x + self.global_factor * x,
                self.origin_offset.y + self.global_factor * y,
            )

    def set_factor(self, s: float) -> None:
        """Scale subsequent user coordinates by *s* about the user origin."""
        self._check_open()
        if not (isinstance(s, (int, float)) and math.isfinite(s) and s > 0):
            raise InvalidFactorError(f"factor must be a positive finite real, got {s!r}")
        self.global_factor = float(s)

    def select_pen(self, k: int) -> None:
        self._check_open()
        if not (isinstance(k, int) and 1 <= k <= 8):
            raise InvalidPenCodeError(f"pen id {k!r} outside 1..8")
        self._emit(("P", k))

    def begin_frame(self, name: str) -> None:
        self._check_open()
        if self._frame_open:
            raise ValueError("frames may not nest")
        self._frame_open = True
        self._commands.append(("B", str(name)))
        self._last_emit = None

    def end_frame(self) -> None:
        self._check_open()
        if not self._frame_open:
            raise ValueError("no open frame")
        self._frame_open = False
        self._commands.append(("E",))
        self._last_emit = None

    def finalize(self) -> DisplayList:
        """Seal the context; subsequent mutation raises SealedContextError."""
        self._check_open()
        if self._frame_open:
            raise ValueError("unterminated frame")
        self._sealed = True
        commands = tuple(self._commands)
        return DisplayList(commands, compute_bbox(commands))


def displaylist_trajectory(dl: DisplayList) -> list[list[Point2]]:
    """Pen-down polylines of *dl* in device mm; marker dots are 1-point runs."""
    runs: list[list[Point2]] = []
    pos: Optional[Point2] = None
    current: Optional[list[Point2]] = None
    for cmd in dl.commands:
        op = cmd[0]
        if op == "M":
            pos = Point2(cmd[1], cmd[2])
            current = None
        elif op == "L":
            p = Point2(cmd[1], cmd[2])
            if current is None:
                current = [pos if pos is not None else p]
                runs.append(current)
            current.append(p)
            pos = p
        elif op == "K":
            p = Point2(cmd[1], cmd[2])
            runs.append([p])
            current = None
            pos = p
        elif op in ("B", "E"):
            current = None
    return runs
