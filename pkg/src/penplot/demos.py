"""Built-in demo surfaces and the shared grid-to-display-list pipeline."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

from .contour import choose_levels, extract_contours, render_contours
from .core import DEVICE_HEIGHT_MM, DEVICE_WIDTH_MM, DisplayList, PlotContext, fit_window
from .surface import (
    EulerAngles,
    ParametricGrid,
    Projection,
    ResolutionParam,
    ScalarGrid,
    _project_array,
    projected_bounds,
    render_closed_surface,
    render_rect_surface,
    rotation_matrix,
    sample_scalar,
)

DEFAULT_DEVICE_RECT = (0.0, 0.0, DEVICE_WIDTH_MM, DEVICE_HEIGHT_MM)
CONTOUR_PREFIX = "contour:"
CONTOUR_LEVEL_COUNT = 8


def sinc(x: float, y: float) -> float:
    r = math.hypot(x, y)
    return math.sin(r) / r if r != 0.0 else 1.0


def saddle(x: float, y: float) -> float:
    return x * x - y * y


def ripple(x: float, y: float) -> float:
    r = math.hypot(x, y)
    return math.cos(r) * math.exp(-r / 3.0)


SCALAR_DEMOS: dict[str, tuple[Callable, tuple, tuple]] = {
    "sinc": (sinc, (-8.0, 8.0), (-8.0, 8.0)),
    "saddle": (saddle, (-1.0, 1.0), (-1.0, 1.0)),
    "ripple": (ripple, (-6.0, 6.0), (-6.0, 6.0)),
}


def sphere_grid(n: int) -> ParametricGrid:
    """Unit sphere, u = longitude (wrapped), v = latitude south to north."""
    u = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    v = np.linspace(0.0, math.pi, n)
    U, V = np.meshgrid(u, v)
    pts = np.dstack([np.sin(V) * np.cos(U), np.sin(V) * np.sin(U), -np.cos(V)])
    return ParametricGrid(pts, wrap_u=True, wrap_v=False)


def torus_grid(n: int, major: float = 2.0, minor: float = 0.75) -> ParametricGrid:
    u = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    v = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    U, V = np.meshgrid(u, v)
    ring = major + minor * np.cos(V)
    pts = np.dstack([ring * np.cos(U), ring * np.sin(U), minor * np.sin(V)])
    return ParametricGrid(pts, wrap_u=True, wrap_v=True)


PARAMETRIC_DEMOS: dict[str, Callable[[int], ParametricGrid]] = {
    "sphere": sphere_grid,
    "torus": torus_grid,
}


def demo_names() -> list[str]:
    """All panel demo names, including the contour variants."""
    names = list(SCALAR_DEMOS) + list(PARAMETRIC_DEMOS)
    names += [CONTOUR_PREFIX + name for name in SCALAR_DEMOS]
    return names


def render_scalar_surface(f: Callable[[float, float], float], x_range, y_range,
                          euler: EulerAngles, projection: Projection,
                          resolution: int, style: str = "rows",
                          width: int = 1024,
                          device_rect=DEFAULT_DEVICE_RECT) -> DisplayList:
    grid = sample_scalar(f, x_range, y_range, ResolutionParam(resolution))
    return render_grid_surface(grid, euler, projection, style, width, device_rect)


def render_grid_surface(grid: ScalarGrid, euler: EulerAngles, projection: Projection,
                        style: str = "rows", width: int = 1024,
                        device_rect=DEFAULT_DEVICE_RECT) -> DisplayList:
    xy, _ = _project_array(rotation_matrix(euler), projection, grid.points())
    ctx = PlotContext(fit_window(projected_bounds(xy), device_rect))
    render_rect_surface(grid, euler, projection, ctx, width=width, style=style)
    return ctx.finalize()


def render_parametric_surface(grid: ParametricGrid, euler: EulerAngles,
                              projection: Projection,
                              device_rect=DEFAULT_DEVICE_RECT) -> DisplayList:
    xy, _ = _project_array(rotation_matrix(euler), projection, grid.points)
    ctx = PlotContext(fit_window(projected_bounds(xy), device_rect))
    render_closed_surface(grid, euler, projection, ctx)
    return ctx.finalize()


def render_scalar_contours(f: Callable[[float, float], float], x_range, y_range,
                           resolution: int, level_count: int,
                           device_rect=DEFAULT_DEVICE_RECT,
                           levels: Optional[list[float]] = None) -> DisplayList:
    """Contour plot over the function's own domain; pens cycle 1..8 by
    level index."""
    grid = sample_scalar(f, x_range, y_range, ResolutionParam(resolution))
    if levels is None:
        levels = choose_levels(grid, level_count)
    bounds = (x_range[0], y_range[0], x_range[1], y_range[1])
    ctx = PlotContext(fit_window(bounds, device_rect))
    for idx, level in enumerate(levels):
        ctx.select_pen(1 + idx % 8)
        render_contours(extract_contours(grid, [level]), ctx)
    return ctx.finalize()


def render_demo(demo: str, euler: EulerAngles, projection: Projection,
                resolution: int, style: str = "rows",
                width: int = 1024) -> DisplayList:
    """Render a named built-in demo; raises ValueError for unknown names."""
    if demo.startswith(CONTOUR_PREFIX):
        base = demo[len(CONTOUR_PREFIX):]
        if base not in SCALAR_DEMOS:
            raise ValueError(f"unknown demo {demo!r}; known: {', '.join(demo_names())}")
        f, x_range, y_range = SCALAR_DEMOS[base]
        return render_scalar_contours(f, x_range, y_range, resolution, CONTOUR_LEVEL_COUNT)
    if demo in SCALAR_DEMOS:
        f, x_range, y_range = SCALAR_DEMOS[demo]
        return render_scalar_surface(f, x_range, y_range, euler, projection,
                                     resolution, style, width)
    if demo in PARAMETRIC_DEMOS:
        grid = PARAMETRIC_DEMOS[demo](resolution)
        return render_parametric_surface(grid, euler, projection)
    raise ValueError(f"unknown demo {demo!r}; known: {', '.join(demo_names())}")
