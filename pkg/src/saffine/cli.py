"""
Command-line front end.

Exit codes: 0 success (or "equivalent"), 1 "not equivalent", 2 usage or
parse error, 3 degenerate curve, 4 dimension mismatch, 5 non-unimodular
map, 6 frame drift exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import __version__
from .affgroup import apply, random_map
from .curvekit import SampledCurve
from .equivalence import check_equivalence
from .errors import DegenerateCurve, DimensionMismatch, DriftExceeded, NotUnimodular, SaffineError
from .formats import SpecError, load_curvature_spec, load_curve, load_map, write_rows
from .invariants import arc_length, invariant_profile
from .reconstruct import integrate_frame

EXIT_NOT_EQUIVALENT = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_DIMENSION = 4
EXIT_NOT_UNIMODULAR = 5
EXIT_DRIFT = 6


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _plot(kind, obj, path, **kw):
    from . import plotting

    getattr(plotting, f"plot_{kind}")(obj, path, **kw)


def cmd_invariants(args) -> int:
    c = load_curve(args.curve)
    profile = invariant_profile(c, npts=args.npts, quad_npts=args.quad_npts, tol=args.natural_tol)
    with _output(args.out) as fh:
        profile.to_csv(fh)
    if args.plot:
        _plot("profile", profile, args.plot)
    return 0


def cmd_arclength(args) -> int:
    c = load_curve(args.curve)
    table = arc_length(c, npts=args.npts)
    with _output(args.out) as fh:
        table.to_csv(fh)
    if args.plot:
        _plot("arclength", table, args.plot)
    return 0


def cmd_check(args) -> int:
    c1, c2 = load_curve(args.curve1), load_curve(args.curve2)
    rep = check_equivalence(c1, c2, npts=args.npts, tol=args.tol, quad_npts=args.quad_npts, natural_tol=args.natural_tol)
    json.dump(rep.to_json(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0 if rep.equivalent else EXIT_NOT_EQUIVALENT


def transform_samples(c, A, npts: int | None = None, pad: bool = True):
    """Grid and positions of A o c.

    Sampled inputs are mapped node by node. Closed-form inputs are sampled
    with spacing (b - a) / (npts - 1), extended past both ends by the
    finite-difference margin so the output re-reads as a sampled curve on
    the same domain.
    """
    if isinstance(c, SampledCurve):
        return c.sample_times(), A(c.points)
    a, b = c.domain
    npts = 4097 if npts is None else npts
    h = (b - a) / (npts - 1)
    m = SampledCurve.margin_nodes(c.n, h) if (pad and c.analytic) else 0
    t = a + h * np.arange(-m, npts + m)
    pos = c._derivatives(t, 0)[:, 0] if m else c.position(t)
    return t, A(pos)


def cmd_transform(args) -> int:
    c = load_curve(args.curve)
    A = load_map(args.map)
    if A.n != c.n:
        raise DimensionMismatch(f"map acts on R^{A.n}, curve lives in R^{c.n}")
    t, pts = transform_samples(c, A, args.npts, pad=not args.no_pad)
    with _output(args.out) as fh:
        write_rows(fh, ["t"] + [f"x_{i}" for i in range(1, c.n + 1)], np.column_stack([t, pts]))
    if args.plot:
        _plot("curve", pts, args.plot)
    return 0


def _matrix_arg(text):
    try:
        m = json.loads(text)
    except json.JSONDecodeError:
        with open(text) as fh:
            m = json.load(fh)
    if isinstance(m, dict):
        m = m["B"]
    return np.asarray(m, dtype=float)


def cmd_reconstruct(args) -> int:
    spec = load_curvature_spec(args.spec)
    try:
        F0 = None if args.frame is None else _matrix_arg(args.frame)
        p0 = None if args.p0 is None else np.asarray(json.loads(args.p0), dtype=float)
    except (OSError, ValueError, KeyError) as e:
        raise SpecError(f"bad --frame/--p0: {e}") from e
    curve = integrate_frame(spec, F0, p0, args.h)
    with _output(args.out) as fh:
        write_rows(fh, ["s"] + [f"x_{i}" for i in range(1, spec.n + 1)], np.column_stack([curve.s, curve.p]))
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            curve.trace_csv(fh)
    if args.plot:
        _plot("curve", curve.p, args.plot)
    return 0


def cmd_randmap(args) -> int:
    if args.n < 2:
        raise SpecError(f"n must be >= 2, got {args.n}")
    A = random_map(args.n, args.seed)
    json.dump(A.to_json(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="saffine", description="Special affine invariants of curves in R^n")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_opts(q, npts=501):
        q.add_argument("--npts", type=int, default=npts, help="output grid size (default %(default)s)")
        q.add_argument("--quad-npts", type=int, default=2001, help="arc-length quadrature points (default %(default)s)")
        q.add_argument(
            "--natural-tol", type=float, default=1e-6,
            help="allowed |det - 1| and |X_n| in the natural parameter (default %(default)s)",
        )

    q = sub.add_parser("invariants", help="curvature profile as CSV")
    q.add_argument("curve")
    curve_opts(q)
    q.add_argument("--out", help="CSV path (default stdout)")
    q.add_argument("--plot", metavar="PNG", help="also render the profile to this image")
    q.set_defaults(func=cmd_invariants)

    q = sub.add_parser("arclength", help="cumulative special affine arc length as CSV")
    q.add_argument("curve")
    q.add_argument("--npts", type=int, default=2001)
    q.add_argument("--out")
    q.add_argument("--plot", metavar="PNG")
    q.set_defaults(func=cmd_arclength)

    q = sub.add_parser("check", help="decide special affine equivalence (exit 0 yes, 1 no)")
    q.add_argument("curve1")
    q.add_argument("curve2")
    q.add_argument("--tol", type=float, default=1e-5)
    curve_opts(q)
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("transform", help="sample A o C as CSV")
    q.add_argument("curve")
    q.add_argument("map")
    q.add_argument("--npts", type=int, default=None, help="grid points on the domain (default 4097)")
    q.add_argument("--no-pad", action="store_true", help="do not extend the grid past the domain")
    q.add_argument("--out")
    q.add_argument("--plot", metavar="PNG")
    q.set_defaults(func=cmd_transform)

    q = sub.add_parser("reconstruct", help="integrate the frame ODE for prescribed curvatures")
    q.add_argument("spec")
    q.add_argument("--frame", help="initial frame as JSON matrix (rows) or a map/matrix JSON file; default identity")
    q.add_argument("--p0", help="initial point as JSON list; default origin")
    q.add_argument("--h", type=float, default=1e-3)
    q.add_argument("--out")
    q.add_argument("--trace", metavar="CSV", help="write the frame trace here")
    q.add_argument("--plot", metavar="PNG")
    q.set_defaults(func=cmd_reconstruct)

    q = sub.add_parser("randmap", help="random special affine map as JSON")
    q.add_argument("n", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_randmap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateCurve as e:
        where = f" (t = {e.t!r})" if e.t is not None else ""
        print(f"saffine: degenerate curve{where}: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DimensionMismatch as e:
        print(f"saffine: dimension mismatch: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except NotUnimodular as e:
        print(f"saffine: {e}", file=sys.stderr)
        return EXIT_NOT_UNIMODULAR
    except DriftExceeded as e:
        print(f"saffine: {e}", file=sys.stderr)
        return EXIT_DRIFT
    except SaffineError as e:
        print(f"saffine: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
