"""3D surface rendering under Euler-angle view control.

Two surface kinds mirror the two classic demo figures: graphs of
z = f(x, y) over a rectangular domain, drawn row-by-row with
floating-horizon hidden-line removal, and closed parametric meshes
(sphere, torus) drawn with back-face culling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .core import PlotContext
from .errors import BehindEyeError, NonFiniteSampleError


@dataclass(frozen=True)
class EulerAngles:
    """View angles in radians, applied as Rz(phi) * Rx(theta) * Rz(psi)."""

    phi: float
    theta: float
    psi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.phi, self.theta, self.psi)):
            raise ValueError("Euler angles must be finite")


@dataclass(frozen=True)
class ResolutionParam:
    """Samples per axis for demo grids."""

    n: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 2):
            raise ValueError(f"resolution must be an integer >= 2, got {self.n!r}")


@dataclass(frozen=True)
class Orthographic:
    pass


@dataclass(frozen=True)
class Perspective:
    distance: float

    def __post_init__(self):
        if not (math.isfinite(self.distance) and self.distance > 0):
            raise ValueError("perspective distance must be positive")


Projection = Union[Orthographic, Perspective]


class ScalarGrid:
    """Samples of z = f(x, y) on a regular grid; z has shape (ny, nx)."""

    def __init__(self, x_range, y_range, z):
        self.z = np.asarray(z, dtype=float)
        if self.z.ndim != 2 or self.z.shape[0] < 2 or self.z.shape[1] < 2:
            raise ValueError("grid needs at least 2 samples per axis")
        if not np.all(np.isfinite(self.z)):
            raise ValueError("grid values must be finite")
        self.x_range = (float(x_range[0]), float(x_range[1]))
        self.y_range = (float(y_range[0]), float(y_range[1]))
        if not (self.x_range[1] > self.x_range[0] and self.y_range[1] > self.y_range[0]):
            raise ValueError("ranges must be non-degenerate")
        self.ny, self.nx = self.z.shape

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_range[0], self.y_range[1], self.ny)

    def points(self) -> np.ndarray:
        """Vertex positions, shape (ny, nx, 3)."""
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.dstack([X, Y, self.z])


class ParametricGrid:
    """Sampled (x, y, z)(u, v) mesh; wrap flags close the parameter loops."""

    def __init__(self, points, wrap_u: bool = False, wrap_v: bool = False):
        self.points = np.asarray(points, dtype=float)
        if self.points.ndim != 3 or self.points.shape[2] != 3:
            raise ValueError("points must have shape (nv, nu, 3)")
        if self.points.shape[0] < 2 or self.points.shape[1] < 2:
            raise ValueError("grid needs at least 2 samples per direction")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("grid coordinates must be finite")
        self.nv, self.nu = self.points.shape[:2]
        self.wrap_u = bool(wrap_u)
        self.wrap_v = bool(wrap_v)


def sample_scalar(f: Callable[[float, float], float], x_range, y_range,
                  res: ResolutionParam) -> ScalarGrid:
    """Sample f on an n-by-n grid including both range endpoints.

    Raises NonFiniteSampleError at the first sample where f is inf/nan.
    """
    n = res.n if isinstance(res, ResolutionParam) else ResolutionParam(res).n
    xs = np.linspace(float(x_range[0]), float(x_range[1]), n)
    ys = np.linspace(float(y_range[0]), float(y_range[1]), n)
    z = np.empty((n, n), dtype=float)
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            v = float(f(float(x), float(y)))
            if not math.isfinite(v):
                raise NonFiniteSampleError(float(x), float(y))
            z[j, i] = v
    return ScalarGrid(x_range, y_range, z)


def rotation_matrix(e: EulerAngles) -> np.ndarray:
    """Z-X-Z rotation: Rz(phi) @ Rx(theta) @ Rz(psi)."""
    cf, sf = math.cos(e.phi), math.sin(e.phi)
    ct, st = math.cos(e.theta), math.sin(e.theta)
    cp, sp = math.cos(e.psi), math.sin(e.psi)
    rz_phi = np.array([[cf, -sf, 0.0], [sf, cf, 0.0], [0.0, 0.0, 1.0]])
    rx_theta = np.array([[1.0, 0.0, 0.0], [0.0, ct, -st], [0.0, st, ct]])
    rz_psi = np.array([[cp, -sp, 0.0], [sp, cp, 0.0], [0.0, 0.0, 1.0]])
    return rz_phi @ rx_theta @ rz_psi


@dataclass(frozen=True)
class ViewTransform:
    rotation: np.ndarray
    projection: Projection

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        if r.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        if np.max(np.abs(r.T @ r - np.eye(3))) >= 1e-12:
            raise ValueError("rotation must be orthonormal")
        if abs(np.linalg.det(r) - 1.0) >= 1e-12:
            raise ValueError("rotation must have determinant +1")
        object.__setattr__(self, "rotation", r)


def project(view: ViewTransform, p) -> tuple[tuple[float, float], float]:
    """Project a 3D point; returns ((x, y), depth), larger depth = nearer."""
    q = view.rotation @ np.asarray(p, dtype=float)
    depth = float(q[2])
    if isinstance(view.projection, Perspective):
        d = view.projection.distance
        if depth >= d:
            raise BehindEyeError(f"point depth {depth} not in front of eye at {d}")
        s = d / (d - depth)
        return (float(q[0]) * s, float(q[1]) * s), depth
    return (float(q[0]), float(q[1])), depth


def default_view() -> tuple[EulerAngles, Projection]:
    """Conventional oblique view used by the demos."""
    return EulerAngles(-math.pi / 4, -math.pi / 3, 0.0), Orthographic()


def _project_array(rotation: np.ndarray, projection: Projection,
                   pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Project points of shape (..., 3) to ((..., 2) xy, (...) depth)."""
    q = pts @ rotation.T
    depth = q[..., 2]
    if isinstance(projection, Perspective):
        d = projection.distance
        if np.any(depth >= d):
            raise BehindEyeError("grid has points at or behind the eye plane")
        s = d / (d - depth)
        xy = q[..., :2] * s[..., None]
    else:
        xy = q[..., :2].copy()
    return xy, depth


def projected_bounds(xy: np.ndarray) -> tuple[float, float, float, float]:
    xs = xy[..., 0]
    ys = xy[..., 1]
    return (float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max()))


class HorizonBuffer:
    """Per-column visibility horizons over the projected x-extent.

    A point is visible iff its y lies strictly above the upper horizon or
    strictly below the lower horizon at its (nearest) column.
    """

    def __init__(self, width: int, xmin: float, xmax: float):
        if width < 2:
            raise ValueError("horizon needs at least 2 columns")
        self.width = width
        self.xmin = xmin
        span = xmax - xmin
        self.scale = (width - 1) / span if span > 0 else 0.0
        self.upper = np.full(width, -np.inf)
        self.lower = np.full(width, np.inf)

    def col_coord(self, x: float) -> float:
        return (x - self.xmin) * self.scale

    def col_x(self, c: int) -> float:
        return self.xmin + c / self.scale if self.scale else self.xmin

    def nearest_col(self, x: float) -> int:
        c = int(round(self.col_coord(x)))
        return 0 if c < 0 else (self.width - 1 if c >= self.width else c)

    def clearance(self, x: float, y: float) -> float:
        """Positive iff (x, y) is visible; signed distance to the masked band."""
        c = self.nearest_col(x)
        return max(y - self.upper[c], self.lower[c] - y)

    def update(self, c: int, y: float) -> None:
        if y > self.upper[c]:
            self.upper[c] = y
        if y < self.lower[c]:
            self.lower[c] = y


def _curve_samples(pts: np.ndarray, hb: HorizonBuffer):
    """Walk a projected polyline, inserting a sample at every horizon
    column crossed; yields (x, y, vertex_index_or_None)."""
    n = len(pts)
    samples = []
    for k in range(n - 1):
        x0, y0 = float(pts[k, 0]), float(pts[k, 1])
        x1, y1 = float(pts[k + 1, 0]), float(pts[k + 1, 1])
        samples.append((x0, y0, k))
        if x1 != x0:
            c0 = hb.col_coord(x0)
            c1 = hb.col_coord(x1)
            if c1 > c0:
                cols = range(math.floor(c0) + 1, math.ceil(c1))
            else:
                cols = range(math.ceil(c0) - 1, math.floor(c1), -1)
            for c in cols:
                if 0 <= c < hb.width:
                    t = (hb.col_x(c) - x0) / (x1 - x0)
                    if 0.0 < t < 1.0:
                        samples.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0), None))
    samples.append((float(pts[n - 1, 0]), float(pts[n - 1, 1]), n - 1))
    return samples


def _boundary_point(xa, ya, ca, xb, yb, cb):
    """Zero crossing of the clearance between two samples, clamped so that
    infinite clearances err toward the visible sample (conservative)."""
    if math.isinf(ca) or math.isinf(cb):
        if ca > 0:
            return xa, ya  # leaving visibility: stop at the visible sample
        return xb, yb  # entering visibility: start at the visible sample
    t = ca / (ca - cb)
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return xa + t * (xb - xa), ya + t * (yb - ya)


def _visible_runs(samples, hb: HorizonBuffer):
    """Split a sampled curve into visible runs; returns (runs, emitted_vertices).

    Runs are point lists already reduced to boundary points plus the grid
    vertices they contain.
    """
    runs: list[list[tuple[float, float]]] = []
    emitted: list[int] = []
    current: Optional[list[tuple[float, float, Optional[int]]]] = None
    prev = None  # (x, y, clearance)
    for x, y, v in samples:
        c = hb.clearance(x, y)
        if c > 0.0:
            if current is None:
                current = []
                if prev is not None and prev[2] <= 0.0:
                    bx, by = _boundary_point(prev[0], prev[1], prev[2], x, y, c)
                    current.append((bx, by, None))
            current.append((x, y, v))
            if v is not None:
                emitted.append(v)
        else:
            if current is not None:
                bx, by = _boundary_point(prev[0], prev[1], prev[2], x, y, c)
                current.append((bx, by, None))
                runs.append(_reduce_run(current))
                current = None
        prev = (x, y, c)
    if current is not None:
        runs.append(_reduce_run(current))
    return runs, emitted


def _reduce_run(run) -> list[tuple[float, float]]:
    """Keep run endpoints and vertex samples; drop collinear column samples."""
    pts: list[tuple[float, float]] = []
    last = len(run) - 1
    for i, (x, y, v) in enumerate(run):
        if i == 0 or i == last or v is not None:
            if not pts or pts[-1] != (x, y):
                pts.append((x, y))
    return pts


def _update_horizon(pts: np.ndarray, hb: HorizonBuffer) -> None:
    for k in range(len(pts) - 1):
        x0, y0 = float(pts[k, 0]), float(pts[k, 1])
        x1, y1 = float(pts[k + 1, 0]), float(pts[k + 1, 1])
        c0 = hb.nearest_col(x0)
        c1 = hb.nearest_col(x1)
        lo, hi = (c0, c1) if c0 <= c1 else (c1, c0)
        if x1 != x0:
            for c in range(lo, hi + 1):
                t = (hb.col_x(c) - x0) / (x1 - x0)
                t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
                hb.update(c, y0 + t * (y1 - y0))
        else:
            for c in range(lo, hi + 1):
                hb.update(c, y0)
                hb.update(c, y1)


def _draw_order(depths: np.ndarray, ys: np.ndarray) -> list[int]:
    """Curve indices nearest first: by mean rotated depth (descending),
    mean projected y and index as deterministic tiebreaks."""
    keys = [(-float(depths[i].mean()), float(ys[i].mean()), i) for i in range(len(depths))]
    return [k[2] for k in sorted(keys)]


@dataclass
class SurfaceRenderData:
    """Inspection hook for tests: draw order, visible runs, per-vertex
    emission mask and optional horizon snapshots for the row pass."""

    order: list[int]
    runs: list[tuple[int, list[list[tuple[float, float]]]]]
    emitted: np.ndarray
    horizons: Optional[list[tuple[int, np.ndarray, np.ndarray]]]


def _hidden_line_pass(curves_xy: np.ndarray, depths: np.ndarray, width: int,
                      extent: tuple[float, float],
                      capture_horizons: bool = False) -> SurfaceRenderData:
    """One floating-horizon pass over a family of curves.

    curves_xy: (ncurves, npoints, 2) projected polylines.
    depths: matching (ncurves, npoints) rotated depths.
    """
    hb = HorizonBuffer(width, extent[0], extent[1])
    order = _draw_order(depths, curves_xy[..., 1])
    emitted = np.zeros(curves_xy.shape[:2], dtype=bool)
    all_runs = []
    snapshots = [] if capture_horizons else None
    for ci in order:
        pts = curves_xy[ci]
        samples = _curve_samples(pts, hb)
        runs, vertices = _visible_runs(samples, hb)
        emitted[ci, vertices] = True
        all_runs.append((ci, runs))
        _update_horizon(pts, hb)
        if snapshots is not None:
            snapshots.append((ci, hb.upper.copy(), hb.lower.copy()))
    return SurfaceRenderData(order, all_runs, emitted, snapshots)


def rect_surface_render_data(grid: ScalarGrid, e: EulerAngles, projection: Projection,
                             width: int = 1024, style: str = "rows",
                             capture_horizons: bool = False,
                             ) -> tuple[SurfaceRenderData, Optional[SurfaceRenderData]]:
    """Hidden-line computation for a rectangular-rank surface.

    Returns the row-pass data and, for mesh style, the column-pass data
    (run against a fresh horizon over the same extent).
    """
    if style not in ("rows", "mesh"):
        raise ValueError(f"style must be 'rows' or 'mesh', got {style!r}")
    rotation = rotation_matrix(e)
    pts = grid.points()
    xy, depth = _project_array(rotation, projection, pts)
    extent = (float(xy[..., 0].min()), float(xy[..., 0].max()))
    rows = _hidden_line_pass(xy, depth, width, extent, capture_horizons)
    cols = None
    if style == "mesh":
        cols = _hidden_line_pass(np.swapaxes(xy, 0, 1), depth.T, width, extent,
                                 capture_horizons)
    return rows, cols


def _emit_runs(data: SurfaceRenderData, ctx: PlotContext) -> None:
    for _, runs in data.runs:
        for run in runs:
            x0, y0 = run[0]
            ctx.plot(x0, y0, 3)
            if len(run) == 1:
                ctx.plot(x0, y0, 2)  # isolated visible point: marker dot
            else:
                for x, y in run[1:]:
                    ctx.plot(x, y, 2)


def render_rect_surface(grid: ScalarGrid, e: EulerAngles, projection: Projection,
                        ctx: PlotContext, width: int = 1024,
                        style: str = "rows") -> None:
    """Draw a z = f(x, y) grid into *ctx*, nearest row first, hidden
    portions removed by the floating horizon."""
    rows, cols = rect_surface_render_data(grid, e, projection, width, style)
    _emit_runs(rows, ctx)
    if cols is not None:
        _emit_runs(cols, ctx)


def _facet_corners(grid: ParametricGrid):
    """Corner index arrays (i, i1, j, j1) for all facets, honoring wrap."""
    nu_f = grid.nu if grid.wrap_u else grid.nu - 1
    nv_f = grid.nv if grid.wrap_v else grid.nv - 1
    i = np.arange(nu_f)
    j = np.arange(nv_f)
    i1 = (i + 1) % grid.nu
    j1 = (j + 1) % grid.nv
    return i, i1, j, j1


def facet_normals(grid: ParametricGrid) -> np.ndarray:
    """Newell normals of all facets, shape (nv_f, nu_f, 3); right-handed
    from the (u, v) orientation, robust for degenerate (pole) facets."""
    i, i1, j, j1 = _facet_corners(grid)
    p = grid.points
    p00 = p[np.ix_(j, i)]
    p10 = p[np.ix_(j, i1)]
    p11 = p[np.ix_(j1, i1)]
    p01 = p[np.ix_(j1, i)]
    n = (np.cross(p00, p10) + np.cross(p10, p11)
         + np.cross(p11, p01) + np.cross(p01, p00))
    return n


def visible_facets(grid: ParametricGrid, rotation: np.ndarray) -> np.ndarray:
    """Boolean (nv_f, nu_f) mask of facets whose rotated normal faces the
    viewer (positive rotated z)."""
    n = facet_normals(grid)
    nz = n @ rotation[2]
    return nz > 0.0


def _facet_edge_keys(i: int, j: int, grid: ParametricGrid):
    """The four mesh edges bounding facet (i, j) as canonical keys.

    Key ("u", i, j) joins vertex (i, j) to (i+1 mod nu, j); key ("v", i, j)
    joins (i, j) to (i, j+1 mod nv).
    """
    j1 = (j + 1) % grid.nv
    i1 = (i + 1) % grid.nu
    return (("u", i, j), ("u", i, j1), ("v", i, j), ("v", i1, j))


def render_closed_surface(grid: ParametricGrid, e: EulerAngles,
                          projection: Projection, ctx: PlotContext) -> None:
    """Draw the mesh edges of all viewer-facing facets, each edge once."""
    rotation = rotation_matrix(e)
    xy, _ = _project_array(rotation, projection, grid.points)
    vis = visible_facets(grid, rotation)
    edges = set()
    nv_f, nu_f = vis.shape
    for j in range(nv_f):
        for i in range(nu_f):
            if vis[j, i]:
                edges.update(_facet_edge_keys(i, j, grid))
    # u-edges chain along rows, v-edges down columns; sort accordingly.
    u_edges = sorted(((j, i) for (kind, i, j) in edges if kind == "u"))
    v_edges = sorted(((i, j) for (kind, i, j) in edges if kind == "v"))
    last = None
    for j, i in u_edges:
        a = xy[j, i]
        b = xy[j, (i + 1) % grid.nu]
        last = _emit_edge(ctx, a, b, last)
    for i, j in v_edges:
        a = xy[j, i]
        b = xy[(j + 1) % grid.nv, i]
        last = _emit_edge(ctx, a, b, last)


def _emit_edge(ctx: PlotContext, a, b, last):
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if last != (ax, ay):
        ctx.plot(ax, ay, 3)
    ctx.plot(bx, by, 2)
    return (bx, by)
