"""Command-line driver: render demos, extract contours, convert DM/PL,
and serve the session API.

Exit codes: 0 success, 1 validation error, 2 I/O error. Errors go to
stderr; with `--out -` the output stream carries file bytes only.
"""

from __future__ import annotations

import argparse
import math
import sys

from .backends import PageSetup, emit_hpgl, emit_svg
from .core import DisplayList
from .demos import (
    PARAMETRIC_DEMOS,
    SCALAR_DEMOS,
    render_demo,
    render_scalar_contours,
    render_scalar_surface,
)
from .dmpl import parse_dmp, translate
from .errors import PlotError
from .expression import parse_expression
from .surface import EulerAngles, Orthographic

EXPR_RANGE = (-4.0, 4.0)  # fixed domain for --expr surfaces

DEFAULT_PHI_DEG = -45.0
DEFAULT_THETA_DEG = -60.0
DEFAULT_PSI_DEG = 0.0


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); keep our codes
        raise CliError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="penplot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="render a 3D surface demo or expression")
    render.add_argument("--demo", help="built-in surface: " + ", ".join(
        list(SCALAR_DEMOS) + list(PARAMETRIC_DEMOS)))
    render.add_argument("--expr", help="z = f(x, y) expression, e.g. 'sin(r)/r'")
    render.add_argument("--phi", type=float, default=DEFAULT_PHI_DEG,
                        help="first Euler angle, degrees")
    render.add_argument("--theta", type=float, default=DEFAULT_THETA_DEG,
                        help="second Euler angle, degrees")
    render.add_argument("--psi", type=float, default=DEFAULT_PSI_DEG,
                        help="third Euler angle, degrees")
    render.add_argument("--res", type=int, default=32, help="grid samples per axis")
    render.add_argument("--format", choices=["hpgl", "svg"],
                        help="output format; default inferred from --out suffix")
    render.add_argument("--out", required=True, help="output path, '-' for stdout")

    contour = sub.add_parser("contour", help="contour a scalar demo or expression")
    contour.add_argument("--demo", help="built-in surface: " + ", ".join(SCALAR_DEMOS))
    contour.add_argument("--expr", help="z = f(x, y) expression")
    contour.add_argument("--res", type=int, default=32, help="grid samples per axis")
    contour.add_argument("--levels", type=int, default=8, help="number of levels")
    contour.add_argument("--format", choices=["hpgl", "svg"])
    contour.add_argument("--out", required=True)

    convert = sub.add_parser("convert", help="translate a DM/PL program to HP-GL")
    convert.add_argument("--in", dest="infile", required=True, help="DM/PL input file")
    convert.add_argument("--out", required=True, help="HP-GL output path, '-' for stdout")

    serve = sub.add_parser("serve", help="start the session service")
    serve.add_argument("--port", type=int, default=8600)

    return parser


def _euler_from_degrees(phi: float, theta: float, psi: float) -> EulerAngles:
    return EulerAngles(math.radians(phi), math.radians(theta), math.radians(psi))


def _pick_format(fmt, out: str) -> str:
    if fmt:
        return fmt
    if out.endswith(".hpgl"):
        return "hpgl"
    if out.endswith(".svg"):
        return "svg"
    raise CliError("cannot infer format; pass --format hpgl|svg")


def _serialize(dl: DisplayList, fmt: str) -> bytes:
    if fmt == "hpgl":
        return emit_hpgl(dl, PageSetup()).file_text().encode("ascii")
    return emit_svg(dl, PageSetup()).encode("utf-8")


def _write_out(data: bytes, out: str) -> None:
    if out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def _surface_source(args):
    if bool(args.demo) == bool(args.expr):
        raise CliError("pass exactly one of --demo or --expr")


def _cmd_render(args) -> None:
    _surface_source(args)
    fmt = _pick_format(args.format, args.out)
    euler = _euler_from_degrees(args.phi, args.theta, args.psi)
    if args.demo:
        dl = render_demo(args.demo, euler, Orthographic(), args.res)
    else:
        f = parse_expression(args.expr)
        dl = render_scalar_surface(f, EXPR_RANGE, EXPR_RANGE, euler,
                                   Orthographic(), args.res)
    _write_out(_serialize(dl, fmt), args.out)


def _cmd_contour(args) -> None:
    _surface_source(args)
    fmt = _pick_format(args.format, args.out)
    if args.levels < 1:
        raise CliError("--levels must be at least 1")
    if args.demo:
        if args.demo not in SCALAR_DEMOS:
            raise CliError(f"unknown scalar demo {args.demo!r}; "
                           f"known: {', '.join(SCALAR_DEMOS)}")
        f, x_range, y_range = SCALAR_DEMOS[args.demo]
    else:
        f = parse_expression(args.expr)
        x_range = y_range = EXPR_RANGE
    dl = render_scalar_contours(f, x_range, y_range, args.res, args.levels)
    _write_out(_serialize(dl, fmt), args.out)


def _cmd_convert(args) -> None:
    with open(args.infile, "r", encoding="ascii") as fh:
        text = fh.read()
    doc = translate(parse_dmp(text), PageSetup())
    _write_out(doc.file_text().encode("ascii"), args.out)


def _cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host="127.0.0.1", port=args.port, log_level="warning")


def run(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
    except CliError as exc:
        print(f"penplot: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "render":
            _cmd_render(args)
        elif args.command == "contour":
            _cmd_contour(args)
        elif args.command == "convert":
            _cmd_convert(args)
        elif args.command == "serve":
            _cmd_serve(args)
        return 0
    except (CliError, PlotError, ValueError) as exc:
        print(f"penplot: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"penplot: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
