"""Command-line entry point.

Every command writes a header of ``#`` lines (tool version, command, the
options that determine the result, seed) followed by its report.  Options
that only affect scheduling (``--jobs``, ``--out``) are not echoed, so runs
that differ only in worker count produce identical bytes.

Exit codes: 0 success, 1 failed check, 2 bad input or invalid track,
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import io
import sys
from fractions import Fraction

from . import __version__
from .assets import load_asset
from .errors import DepthLimitError, EnumerationLimitError, GeolamError, TrackStructureError
from .lamination import from_multicurve
from .track import (
    enumerate_paths,
    euler_characteristic,
    format_path,
    validate,
    weight_space_dimension,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


def fmt(x) -> str:
    """Rationals as p/q, floats to 12 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.12g}"
    if x is None:
        return ""
    return str(x)


def _track(name: str):
    try:
        return load_asset(name)
    except FileNotFoundError as exc:
        raise CliError(EXIT_INPUT, "missing-file", str(exc)) from None
    except (TrackStructureError, ValueError) as exc:
        raise CliError(EXIT_INPUT, "bad-track", str(exc)) from None


def _require_valid(track):
    diags = validate(track)
    if diags:
        raise CliError(EXIT_INPUT, "invalid-track", "; ".join(map(str, diags)))
    return track


def _lamination(track, text: str):
    """``w:a=1,b=2`` for a weighted multicurve, anything else as a slope."""
    if text.startswith("w:"):
        try:
            w = {k: int(v) for k, v in (item.split("=") for item in text[2:].split(","))}
        except ValueError:
            raise CliError(EXIT_INPUT, "bad-weights", f"cannot parse weights {text!r}") from None
        missing = set(track.edge_ids) - set(w)
        w.update({eid: 0 for eid in missing})
        return from_multicurve(track, w)
    from .torus import parse_slope, slope_to_lamination

    try:
        return slope_to_lamination(parse_slope(text), track)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, "bad-slope", str(exc)) from None


# commands

def cmd_validate(args, out):
    track = _track(args.asset)
    diags = validate(track)
    out.write(f"track {track.name}\n")
    out.write(f"switches {len(track.switches)}\n")
    out.write(f"edges {len(track.edges)}\n")
    if diags:
        for d in diags:
            out.write(f"diagnostic {d}\n")
        out.write("status invalid\n")
        raise CliError(EXIT_INPUT, "invalid-track", f"{len(diags)} violated condition(s)")
    from .zippers import cusps

    out.write(f"euler_characteristic {euler_characteristic(track)}\n")
    out.write(f"cusps {len(cusps(track))}\n")
    out.write(f"weight_space_dimension {weight_space_dimension(track)}\n")
    for reg in track.regions:
        out.write(f"region {reg.kind} spikes={reg.spike_count} boundary={format_path(reg.walk)}\n")
    out.write("status valid\n")


def cmd_paths(args, out):
    track = _require_valid(_track(args.track))
    if args.lamination:
        paths = _lamination(track, args.lamination).realized_paths(args.r).paths
    else:
        paths = enumerate_paths(track, args.r, args.cap)
    out.write(f"# count {len(paths)}\n")
    for p in paths:
        out.write(format_path(p) + "\n")


def cmd_dtheta(args, out):
    from .metrics import d_theta

    track = _require_valid(_track(args.track))
    lhs, rhs = _lamination(track, args.lhs), _lamination(track, args.rhs)
    d = d_theta(lhs, rhs, args.rmax)
    out.write(f"value {fmt(d.value)}\n")
    out.write(f"depth {fmt(d.depth)}\n")
    out.write(f"witness {format_path(d.witness) if d.witness else ''}\n")
    out.write(f"capped {fmt(d.capped)}\n")


def cmd_metriccheck(args, out):
    from .dimension import farey_sample
    from .metrics import (
        CRITICAL_VALUE,
        check_triangle_dlog,
        check_ultrametric,
        d_log_transform,
        lipschitz_window,
        model_hausdorff,
    )

    track = _require_valid(_track(args.track))
    points = farey_sample(args.slopes, track)
    ultra = check_ultrametric(points, args.rmax, args.jobs)
    worst_u = min((min(v[3:]) - max(v[3:]) for v in ultra.violations), default=Fraction(0))
    samples = []
    dist = ultra.distances
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                u, v, w = (float(dist[i][j].value), float(dist[j][k].value), float(dist[i][k].value))
                samples.append((u, v, w))
    tri = check_triangle_dlog(samples, args.grid)
    lo, hi = lipschitz_window(args.b)
    ratios = []
    for i in range(n):
        for j in range(i + 1, n):
            dt = float(dist[i][j].value)
            if dt > 0:
                ratios.append(d_log_transform(model_hausdorff(points[i], points[j], args.b,
                                                              args.rmax)) / dt)
    lip_ok = all(lo - 1e-12 <= x <= hi + 1e-12 for x in ratios)
    out.write("check,passed,worst_margin,detail\n")
    out.write(f"ultrametric,{fmt(ultra.passed)},{fmt(worst_u)},"
              f"points={n} triples={ultra.n_triples} violations={len(ultra.violations)}\n")
    out.write(f"dlog_grid,{fmt(tri.grid_min >= -1e-12)},{fmt(tri.grid_min)},"
              f"grid={args.grid} argmin={fmt(tri.grid_argmin[0])}:{fmt(tri.grid_argmin[1])}\n")
    crit_err = abs(tri.critical_value - CRITICAL_VALUE)
    out.write(f"dlog_critical,{fmt(crit_err <= 1e-9)},{fmt(tri.critical_value)},"
              f"point={fmt(tri.critical_point)} error={fmt(crit_err)}\n")
    out.write(f"dlog_samples,{fmt(tri.sample_min >= -1e-12)},{fmt(tri.sample_min)},"
              f"triples={len(samples)}\n")
    out.write(f"dlog_lipschitz,{fmt(lip_ok)},{fmt(min(ratios, default=0.0))},"
              f"b={fmt(args.b)} window={fmt(lo)}:{fmt(hi)} max={fmt(max(ratios, default=0.0))}\n")
    if not (ultra.passed and tri.passed and crit_err <= 1e-9 and lip_ok):
        raise CliError(EXIT_FAIL, "check-failed", "metric check failed")


def _read_census_file(track, path: str) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.split("#")[0].strip() for ln in fh]
    except OSError as exc:
        raise CliError(EXIT_INPUT, "missing-file", str(exc)) from None
    return [_lamination(track, ln) for ln in lines if ln]


def cmd_zippers(args, out):
    from .dimension import census_sizes
    from .zippers import zipper_count_table

    track = _require_valid(_track(args.track))
    rs = list(range(args.rmin, args.r + 1))
    census = {}
    if args.census:
        sample = _read_census_file(track, args.census)
        census = dict(zip(rs, census_sizes(track, sample, rs, args.jobs)))
    rows = zipper_count_table(track, rs, args.cap, census)
    out.write("r,zipper_count,bound_z_r,bound_better,census_size,status\n")
    capped = False
    for row in rows:
        status = "complete" if row.count is not None else "capped"
        count = row.count if row.count is not None else row.partial
        capped = capped or row.count is None
        out.write(f"{row.r},{fmt(count)},{row.bound},{fmt(row.better)},{fmt(row.census)},{status}\n")
    if capped:
        raise CliError(EXIT_CAP, "cap-exceeded", f"zipper enumeration exceeded cap {args.cap}")


def cmd_dimension(args, out):
    from .dimension import (
        ScaleSchedule,
        cover_counts,
        estimate_dimension,
        farey_sample,
        multicurve_sample,
        saturating_order,
    )

    track = _require_valid(_track(args.track))
    rs = list(range(args.rmin, args.rmax + 1, args.step))
    if args.schedule == "exp":
        schedule = ScaleSchedule.exponential(rs, args.a, args.b)
    else:
        schedule = ScaleSchedule.reciprocal(rs, args.a)
    if set(track.edge_ids) == {"a", "b"}:
        q = saturating_order(args.rmax) if args.slopes == "auto" else int(args.slopes)
        sample = farey_sample(q, track)
        source = f"farey:{q}"
    else:
        sample = multicurve_sample(track, args.samples, args.seed)
        source = f"multicurves:{len(sample)}"
    rows = cover_counts(track, sample, schedule, args.jobs)
    out.write(f"# sample {source}\n")
    out.write("r,eps,N,running_estimate\n")
    for row in rows:
        out.write(f"{row.r},{fmt(row.eps)},{row.count},{fmt(row.running)}\n")
    est = estimate_dimension(rows, schedule, args.window if args.window == "all"
                             else "top-half")
    out.write(f"# estimate slope={fmt(est.slope)} intercept={fmt(est.intercept)} "
              f"residual={fmt(est.residual)} r_range={est.r_range[0]}:{est.r_range[1]} "
              f"scales={est.n_scales} source={est.source}\n")
    out.write("# gnuplot: set datafile separator ','; "
              "plot '<file>' using (log(1/$2)):(log($3)) skip 1 with linespoints\n")


# argument parsing

def _common(parser: argparse.ArgumentParser, defaults: bool):
    sup = {} if defaults else {"default": argparse.SUPPRESS}
    parser.add_argument("--jobs", type=int, help="worker threads", **({"default": 1} | sup))
    parser.add_argument("--cap", type=int, help="enumeration cap",
                        **({"default": 2_000_000} | sup))
    parser.add_argument("--out", help="write the report here instead of stdout",
                        **({"default": None} | sup))
    parser.add_argument("--seed", type=int, help="sampling seed", **({"default": 0} | sup))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geolam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"geolam {__version__}")
    _common(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)
    shared = argparse.ArgumentParser(add_help=False)
    _common(shared, False)

    p = sub.add_parser("validate", parents=[shared], help="check a track asset")
    p.add_argument("asset", help="bundled asset name or .track file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("paths", parents=[shared], help="legal or realized edge paths")
    p.add_argument("--track", required=True)
    p.add_argument("--r", type=int, required=True, help="path length")
    p.add_argument("--lamination", help="slope or w:edge=weight,... ; omit for all legal paths")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("dtheta", parents=[shared], help="combinatorial distance")
    p.add_argument("--track", required=True)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--rmax", type=int, default=64)
    p.set_defaults(func=cmd_dtheta)

    p = sub.add_parser("zippers", parents=[shared], help="zipper family counts and bounds")
    p.add_argument("--track", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--rmin", type=int, default=1)
    p.add_argument("--census", help="file with one lamination per line")
    p.set_defaults(func=cmd_zippers)

    p = sub.add_parser("dimension", parents=[shared], help="box-counting estimate")
    p.add_argument("--track", required=True)
    p.add_argument("--slopes", default="auto", help="Farey order for the torus, or 'auto'")
    p.add_argument("--samples", type=int, default=60, help="multicurve sample size elsewhere")
    p.add_argument("--rmin", type=int, default=1)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--schedule", choices=("exp", "recip"), default="exp")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--window", choices=("top-half", "all"), default="top-half")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("metriccheck", parents=[shared], help="ultrametric and d_log checks")
    p.add_argument("--track", default="torus")
    p.add_argument("--slopes", type=int, default=12, help="Farey order of the sample")
    p.add_argument("--rmax", type=int, default=64)
    p.add_argument("--grid", type=int, default=1000)
    p.add_argument("--b", type=float, default=1.0)
    p.set_defaults(func=cmd_metriccheck)
    return parser


def _header(args) -> str:
    skip = {"func", "jobs", "out", "command", "seed"}
    config = " ".join(f"{k}={fmt(v)}" for k, v in sorted(vars(args).items()) if k not in skip)
    return (f"# geolam {__version__}\n# command {args.command}\n"
            f"# config {config}\n# seed {args.seed}\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: bad-option --jobs must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    buf = io.StringIO()
    buf.write(_header(args))
    code = EXIT_OK
    try:
        args.func(args, buf)
    except CliError as exc:
        print(f"error: {exc.kind} {exc}", file=sys.stderr)
        code = exc.code
    except EnumerationLimitError as exc:
        buf.write(f"# partial {exc.partial}\n")
        print(f"error: cap-exceeded {exc}", file=sys.stderr)
        code = EXIT_CAP
    except DepthLimitError as exc:
        print(f"error: depth-limit {exc}", file=sys.stderr)
        code = EXIT_INPUT
    except GeolamError as exc:
        print(f"error: {type(exc).__name__} {exc}", file=sys.stderr)
        code = EXIT_INPUT
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
