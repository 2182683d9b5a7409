"""Command-line interface: ``triaxgeo {forward,inverse,batch,bench,bodies}``.

Exit codes: 0 success, 1 some batch rows failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from . import bench
from .bodies import (
    BodyRecord,
    CatalogError,
    UnknownBodyError,
    builtin_catalog,
    load_catalog,
    lookup,
    serialize_catalog,
)
from .ellipsoid import CartesianPoint, GeodeticCoord, TriaxialEllipsoid, geodetic_to_cartesian
from .rootfinding import RootFindingError
from .transform import cartesian_to_geodetic

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2
UNDEFINED = "undefined"


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    """Shortest round-trip decimal (at most 17 significant digits), integral values without '.0'."""
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _catalog(args):
    if args.catalog:
        try:
            return load_catalog(args.catalog)
        except OSError as exc:
            raise UsageError(f"cannot read catalog: {exc}") from None
    return builtin_catalog()


def _parse_axes(text):
    try:
        axes = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--axes expects 'a_x,a_y,a_z', got {text!r}") from None
    if len(axes) != 3:
        raise UsageError(f"--axes expects three values, got {len(axes)}")
    return TriaxialEllipsoid(*axes)


def _ellipsoid(args) -> TriaxialEllipsoid:
    if (args.body is None) == (args.axes is None):
        raise UsageError("give exactly one of --body or --axes")
    if args.axes is not None:
        return _parse_axes(args.axes)
    return lookup(args.body, _catalog(args)).ellipsoid


def _angle_in(v, degrees):
    return math.radians(v) if degrees else v


def _angle_out(v, degrees):
    return math.degrees(v) if degrees else v


def cmd_forward(args) -> int:
    e = _ellipsoid(args)
    g = GeodeticCoord(_angle_in(args.phi, args.degrees), _angle_in(args.lam, args.degrees), args.h)
    p = geodetic_to_cartesian(e, g)
    print(" ".join(fmt(v) for v in p))
    return EXIT_OK


def _geodetic_fields(g: GeodeticCoord, degrees: bool):
    phi = fmt(_angle_out(g.phi, degrees))
    lam = UNDEFINED if g.lam is None else fmt(_angle_out(g.lam, degrees))
    return phi, lam, fmt(g.h)


def cmd_inverse(args) -> int:
    e = _ellipsoid(args)
    g = cartesian_to_geodetic(e, CartesianPoint(args.x, args.y, args.z), args.algo)
    phi, lam, h = _geodetic_fields(g, args.degrees)
    if lam == UNDEFINED:
        lam = f"lambda={UNDEFINED}"
    print(phi, lam, h)
    return EXIT_OK


def _is_header(row):
    try:
        [float(v) for v in row]
    except ValueError:
        return True
    return False


def cmd_batch(args) -> int:
    e = _ellipsoid(args)
    try:
        with open(args.input, encoding="utf-8", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out_rows = []
    failures = 0
    if rows and _is_header(rows[0]):
        rows = rows[1:]
        out_rows.append(["phi", "lambda", "h"])
    for n, row in enumerate(rows, start=1):
        try:
            if len(row) != 3:
                raise ValueError(f"expected 3 fields, got {len(row)}")
            p = CartesianPoint(*(float(v) for v in row))
            out_rows.append(list(_geodetic_fields(cartesian_to_geodetic(e, p, args.algo), args.degrees)))
        except (ValueError, RootFindingError) as exc:
            failures += 1
            print(f"row {n}: {exc}", file=sys.stderr)
            out_rows.append(["error", "error", "error"])

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                csv.writer(fh, lineterminator="\n").writerows(out_rows)
        else:
            csv.writer(sys.stdout, lineterminator="\n").writerows(out_rows)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_bench(args) -> int:
    if args.axes is not None:
        if args.body is not None:
            raise UsageError("give at most one of --body or --axes")
        targets = [BodyRecord("custom", _parse_axes(args.axes), "user")]
    elif args.body is not None:
        targets = [lookup(args.body, _catalog(args))]
    else:
        targets = _catalog(args)
    grid = bench.full_grid() if args.full_grid else bench.desk_grid()
    algos = {"1": ["I"], "2": ["II"], "both": ["I", "II"]}[args.algo]
    if args.repeat < 1:
        raise UsageError("--repeat must be at least 1")

    reports = [
        bench.run_benchmark(body, grid, algo, repeat=args.repeat) for body in targets for algo in algos
    ]
    sys.stdout.write(bench.emit_report(reports, "table"))
    if args.out:
        try:
            bench.emit_report(reports, "csv", out=args.out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_OK


def cmd_bodies(args) -> int:
    sys.stdout.write(serialize_catalog(_catalog(args)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--body", help="body name from the catalog")
    source.add_argument("--axes", help="explicit semiaxes 'a_x,a_y,a_z' in km")
    source.add_argument("--catalog", help="extra catalog file (name,a_x,a_y,a_z per line)")

    convert = argparse.ArgumentParser(add_help=False, parents=[source])
    convert.add_argument("--algo", choices=("1", "2"), default="2", help="inversion algorithm (default 2)")
    convert.add_argument("--degrees", action="store_true", help="angles in degrees instead of radians")

    parser = argparse.ArgumentParser(
        prog="triaxgeo", description="Cartesian/geodetic conversion on a triaxial ellipsoid."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", parents=[convert], help="geodetic (phi lam h) to Cartesian")
    p.add_argument("phi", type=float)
    p.add_argument("lam", type=float)
    p.add_argument("h", type=float, help="height in km")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("inverse", parents=[convert], help="Cartesian (x y z) to geodetic")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("z", type=float)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("batch", parents=[convert], help="convert a CSV of x,y,z rows")
    p.add_argument("input")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("bench", parents=[source], help="round-trip accuracy and timing sweep")
    p.add_argument("--algo", choices=("1", "2", "both"), default="both")
    p.add_argument("--full-grid", action="store_true", help="359x359x9 grid instead of 35x35x9")
    p.add_argument("--repeat", type=int, default=3, help="timed repetitions, fastest reported")
    p.add_argument("--out", help="write the CSV report here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bodies", parents=[source], help="print the body catalog")
    p.set_defaults(func=cmd_bodies)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnknownBodyError, CatalogError, ValueError, RootFindingError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
