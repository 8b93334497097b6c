"""Command-line entry point: ``polyft <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 bad input data, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import FieldEvaluationError, InputDataError, NumericError, PolyFTError
from .geometry import validate_mesh
from .mesh_io import (
    GeneratorSpec,
    generate,
    parse_surfacemesh,
    read_field_csv,
    write_field_csv,
    write_surfacemesh,
)
from .qfield import Axis, QGrid, compare_fields, evaluate_field
from .voxel_ref import voxelize, write_occupancy

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


class UsageError(Exception):
    pass


def _axis(text):
    try:
        return Axis.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_grid(p):
    p.add_argument("--qx", type=_axis, default=Axis(0.0, 0.0, 1), metavar="START:STOP:COUNT")
    p.add_argument("--qy", type=_axis, default=Axis(0.0, 0.0, 1), metavar="START:STOP:COUNT")
    p.add_argument("--qz", type=_axis, default=Axis(0.0, 0.0, 1), metavar="START:STOP:COUNT")
    p.add_argument("--out", required=True, type=Path, help="output CSV")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polyft",
        description="Exact Fourier transforms of polygonal areas and polyhedral volumes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for field evaluation (default: all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="mesh transform over a Q grid")
    p.add_argument("--mesh", required=True, type=Path)
    _add_grid(p)

    p = sub.add_parser("analytic", help="closed-form sphere or prism transform")
    p.add_argument("--shape", required=True, choices=["sphere", "prism"])
    p.add_argument("--radius", type=float)
    p.add_argument("--dims", type=_floats, help="a,b,c")
    _add_grid(p)

    p = sub.add_parser("voxelize", help="write the occupied cells of a voxelized mesh")
    p.add_argument("--mesh", required=True, type=Path)
    p.add_argument("--pitch", required=True, type=float)
    p.add_argument("--out-occupancy", required=True, type=Path)

    p = sub.add_parser("voxel-transform", help="voxelize, then transform the voxel set")
    p.add_argument("--mesh", required=True, type=Path)
    p.add_argument("--pitch", required=True, type=float)
    _add_grid(p)

    p = sub.add_parser("compare", help="error report of field A against reference B")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", required=True, type=Path)

    p = sub.add_parser("generate", help="write a canonical test mesh")
    p.add_argument("--shape", required=True, choices=["cube", "prism", "icosphere", "uvsphere"])
    p.add_argument("--dims", type=_floats)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--subdiv", type=int, default=0)
    p.add_argument("--match-volume", type=float)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("validate", help="check a mesh; exit 0 only if clean")
    p.add_argument("--mesh", required=True, type=Path)
    return parser


def _read_mesh(path):
    try:
        return parse_surfacemesh(path.read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write(path, data):
    # whole file built in memory first, so a failure never leaves partial output
    try:
        path.write_bytes(data)
    except OSError as exc:
        try:
            path.unlink()
        except OSError:
            pass
        raise UsageError(f"cannot write {path}: {exc}") from None


def _grid(args):
    try:
        return QGrid(args.qx, args.qy, args.qz)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def run(args, out=None):
    out = out or sys.stdout
    threads = args.threads
    cmd = args.command
    if cmd == "transform":
        mesh = _read_mesh(args.mesh)
        field = evaluate_field("mesh", mesh, _grid(args), threads)
        _write(args.out, write_field_csv(field))
    elif cmd == "analytic":
        if args.shape == "sphere":
            if args.radius is None or args.radius <= 0:
                raise UsageError("analytic sphere needs --radius > 0")
            field = evaluate_field("sphere", args.radius, _grid(args), threads)
        else:
            if args.dims is None or len(args.dims) != 3 or min(args.dims) <= 0:
                raise UsageError("analytic prism needs --dims a,b,c with positive values")
            field = evaluate_field("prism", args.dims, _grid(args), threads)
        _write(args.out, write_field_csv(field))
    elif cmd == "voxelize":
        if not args.pitch > 0:
            raise UsageError("--pitch must be positive")
        grid = voxelize(_read_mesh(args.mesh), args.pitch)
        _write(args.out_occupancy, write_occupancy(grid))
    elif cmd == "voxel-transform":
        if not args.pitch > 0:
            raise UsageError("--pitch must be positive")
        vgrid = voxelize(_read_mesh(args.mesh), args.pitch)
        field = evaluate_field("voxel", vgrid, _grid(args), threads)
        _write(args.out, write_field_csv(field))
    elif cmd == "compare":
        try:
            a, b = read_field_csv(args.a.read_bytes()), read_field_csv(args.b.read_bytes())
        except OSError as exc:
            raise UsageError(str(exc)) from None
        for line in compare_fields(a, b).lines():
            print(line, file=out)
    elif cmd == "generate":
        kwargs = {"kind": args.shape, "radius": args.radius, "subdivision": args.subdiv,
                  "volume_match": args.match_volume}
        if args.dims is not None:
            kwargs["dims"] = args.dims
        elif args.shape == "cube":
            kwargs["dims"] = (1.0,)
        _write(args.out, write_surfacemesh(generate(GeneratorSpec(**kwargs))))
    elif cmd == "validate":
        report = validate_mesh(_read_mesh(args.mesh))
        for line in report.lines():
            print(line, file=out)
        return 0 if report.clean else EXIT_DATA
    return 0


_VALUE_FLAGS = ("--qx", "--qy", "--qz", "--dims")


def _attach_negative_values(argv):
    # argparse takes "-10:10:40" for an option; bind it to its flag instead
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _VALUE_FLAGS and nxt and nxt[:1] == "-" and (nxt[1:2].isdigit() or nxt[1:2] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    prog = f"polyft {args.command}"
    try:
        return run(args)
    except UsageError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FieldEvaluationError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC if isinstance(exc.cause, NumericError) else EXIT_DATA
    except InputDataError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, PolyFTError) as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
