"""penplot: device-independent pen-plotter graphics toolkit."""

from .core import (
    DisplayList,
    PlotContext,
    Point2,
    Window,
    clip_segment,
    displaylist_trajectory,
    fit_window,
    identity_window,
    user_to_device,
    validate_display_list,
)
from .surface import (
    EulerAngles,
    Orthographic,
    ParametricGrid,
    Perspective,
    ResolutionParam,
    ScalarGrid,
    ViewTransform,
    default_view,
    project,
    render_closed_surface,
    render_rect_surface,
    rotation_matrix,
    sample_scalar,
)
from .contour import ContourPolyline, choose_levels, extract_contours, render_contours
from .backends import HpglDocument, PageSetup, emit_hpgl, emit_svg, hpgl_trajectory
from .dmpl import DmpProgram, parse_dmp, translate, trajectory

__all__ = [
    "DisplayList",
    "PlotContext",
    "Point2",
    "Window",
    "clip_segment",
    "displaylist_trajectory",
    "fit_window",
    "identity_window",
    "user_to_device",
    "validate_display_list",
    "EulerAngles",
    "Orthographic",
    "ParametricGrid",
    "Perspective",
    "ResolutionParam",
    "ScalarGrid",
    "ViewTransform",
    "default_view",
    "project",
    "render_closed_surface",
    "render_rect_surface",
    "rotation_matrix",
    "sample_scalar",
    "ContourPolyline",
    "choose_levels",
    "extract_contours",
    "render_contours",
    "HpglDocument",
    "PageSetup",
    "emit_hpgl",
    "emit_svg",
    "hpgl_trajectory",
    "DmpProgram",
    "parse_dmp",
    "translate",
    "trajectory",
]

__version__ = "0.1.0"
