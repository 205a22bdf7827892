"""Command-line front end: ``orbit``, ``locus``, ``foci-curve`` and ``verify``.

Exit codes: 0 success, 1 numerical or check failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .billiard import BilliardError, caustic_for_3_periodic, orbit_family, orbit_from_vertex
from .conics import ConicError, Ellipse
from .cproj import PreconditionError
from .locus import LocusError, PointLocus, foci_curve, incenter, inradius, locus_of_incenters
from .verify import DEFAULT_TOLERANCES, SUITES, Check, run_suite

NUMERICAL_ERRORS = (BilliardError, LocusError, ConicError, PreconditionError, ArithmeticError)


class UsageError(Exception):
    pass


def fmt(x) -> str:
    return format(float(x), ".17g")


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def to_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def parse_tolerances(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        if name not in DEFAULT_TOLERANCES:
            raise UsageError(f"unknown tolerance {name!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise UsageError(f"tolerance {name} is not a number: {value!r}") from None
    return out


def table_from(args) -> Ellipse:
    if not (args.b > 0 and args.a >= args.b):
        raise UsageError(f"need a >= b > 0, got a={args.a}, b={args.b}")
    return Ellipse(args.a, args.b)


def orbit_record(o) -> dict:
    c = incenter(o)
    return {
        "vertices": o.vertices.tolist(),
        "thetas": o.thetas.tolist(),
        "sides": [s.normalized().real.tolist() for s in o.sides],
        "tangency_points": o.tangency_points.tolist(),
        "perimeter": o.perimeter,
        "inradius": inradius(o),
        "incenter": c.tolist(),
        "caustic": {"a": o.caustic.a, "b": o.caustic.b},
        "residuals": {
            "boundary": o.boundary_residual(),
            "reflection": float(o.reflection_residuals().max()),
            "tangency": float(o.tangency_residuals().max()),
            "closure": o.closure_residual,
        },
    }


def cmd_orbit(args) -> int:
    if args.theta is None:
        raise UsageError("orbit needs --theta")
    e = table_from(args)
    sol = caustic_for_3_periodic(e)
    text = to_json(orbit_record(orbit_from_vertex(e, sol, args.theta)))
    sys.stdout.write(text)
    if args.out:
        write_atomic(os.path.join(args.out, "orbit.json"), text)
    return 0


LOCUS_HEADER = ["theta", "v1x", "v1y", "v2x", "v2y", "v3x", "v3y", "ix", "iy", "r"]


def cmd_locus(args) -> int:
    e = table_from(args)
    if args.samples < 12:
        raise UsageError("--samples must be >= 12")
    out = args.out or "."
    sol = caustic_for_3_periodic(e)
    orbits = orbit_family(e, args.samples, sol)
    rows = []
    for o in orbits:
        c = incenter(o)
        rows.append([o.thetas[0], *o.vertices.ravel(), c[0], c[1], inradius(o)])
    if args.format == "csv":
        write_atomic(os.path.join(out, "locus.csv"), to_csv(LOCUS_HEADER, rows))
    else:
        records = [dict(zip(LOCUS_HEADER, map(float, row))) for row in rows]
        write_atomic(os.path.join(out, "locus.json"), to_json(records))
    try:
        _, fit = locus_of_incenters(e, args.samples, sol)
    except PointLocus as deg:
        report = {"kind": "degenerate", "point_locus": True, "max_radius": deg.max_radius,
                  "message": str(deg)}
        write_atomic(os.path.join(out, "fit.json"), to_json(report))
        print(deg)
        return 0
    write_atomic(os.path.join(out, "fit.json"), to_json(fit.as_dict()))
    print(f"kind={fit.kind} residual_max={fit.residual_max:.3e} semi_axes={fit.semi_axes}")
    return 0 if fit.kind == "ellipse" else 1


def cmd_foci_curve(args) -> int:
    if not 0 < args.t_min < args.t_max < 1:
        raise UsageError("need 0 < t-min < t-max < 1")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if args.samples < 12:
        raise UsageError("--samples must be >= 12")
    grid = np.round(np.linspace(args.t_min, args.t_max, args.steps), 12)
    samples = foci_curve(grid, args.samples)
    out = args.out or "."
    rows = [[s.t, s.d_gamma, s.d_locus] for s in samples]
    if args.format == "csv":
        write_atomic(os.path.join(out, "foci.csv"), to_csv(["t", "d_gamma", "d_locus"], rows))
    else:
        records = [{"t": s.t, "d_gamma": s.d_gamma, "d_locus": s.d_locus} for s in samples]
        write_atomic(os.path.join(out, "foci.json"), to_json(records))
    print(f"{len(samples)} samples, max d_locus/d_gamma = "
          f"{max(s.d_locus / s.d_gamma for s in samples):.6f}")
    return 0


def cmd_verify(args) -> int:
    e = table_from(args)
    report = run_suite(args.suite, e.a, e.b, args.seed, args.samples, args.tolerances)
    for name, checks in report["suites"].items():
        for c in checks:
            print(f"{name:10s} {Check(**c).line()}", file=sys.stderr)
    text = to_json(report)
    sys.stdout.write(text)
    if args.out:
        write_atomic(os.path.join(args.out, "verify.json"), text)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=float, default=1.0, help="semi-major axis of the table")
    common.add_argument("--b", type=float, default=0.5, help="semi-minor axis of the table")
    common.add_argument("--samples", type=int, default=360, help="orbits per sweep")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="override a named tolerance (repeatable)")

    parser = argparse.ArgumentParser(prog="ellbilliard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", parents=[common], help="one 3-periodic orbit as JSON")
    p.add_argument("--theta", type=float, default=None, help="boundary parameter of the first vertex")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("locus", parents=[common], help="incenter sweep and conic fit")
    p.set_defaults(func=cmd_locus)

    p = sub.add_parser("foci-curve", parents=[common], help="focal distances against b/a")
    p.add_argument("--t-min", type=float, default=0.05)
    p.add_argument("--t-max", type=float, default=0.95)
    p.add_argument("--steps", type=int, default=19)
    p.set_defaults(func=cmd_foci_curve)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.tolerances = parse_tolerances(args.tol)
        return args.func(args)
    except UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {err}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
