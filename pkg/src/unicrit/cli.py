"""Command-line front end.

Every subcommand writes its outputs and a ``<stem>.manifest.json`` into
``--out``.  Exit codes: 0 ok, 1 bad flags or failed check, 2 NotEscaping,
3 BranchAmbiguity, 4 NewtonStall / non-convergence, 5 ResolutionInsufficient.
"""

import argparse
import math
import os
import re
import sys

from . import __version__
from .dynamics import MapParams
from .errors import NewtonStall, UnicritError
from .io import (cache_key, cache_load, cache_store, dumps, jsonable, write_csv, write_json,
                 write_ray_csv)
from .manifest import RunManifest
from .potential import AngleRational, bottcher_jet, external_angle, green

PLANES = {"param": "parameter", "parameter": "parameter", "dyn": "dynamical",
          "dynamical": "dynamical"}


class UsageError(Exception):
    exit_code = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# flag value parsers --------------------------------------------------------

def parse_complex(text):
    """'a,b', '-0.5+0.2j', '3i' or a plain real."""
    s = text.strip().replace(" ", "")
    try:
        if "," in s:
            a, b = s.split(",")
            return complex(float(a), float(b))
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


_POW = re.compile(r"^2\^(-?\d+)$")


def _one_potential(s):
    m = _POW.match(s)
    if m:
        return 2.0 ** int(m.group(1))
    return float(s)


def parse_potentials(text):
    """'2^-k', '2^-a..2^-b' (every power in between), or comma-separated values."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                ma, mb = _POW.match(lo.strip()), _POW.match(hi.strip())
                if not (ma and mb):
                    raise ValueError(part)
                a, b = int(ma.group(1)), int(mb.group(1))
                step = 1 if b >= a else -1
                out.extend(2.0**k for k in range(a, b + step, step))
            else:
                out.append(_one_potential(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad potential list: {text!r}") from None
    if not out or any(not (t > 0) for t in out):
        raise argparse.ArgumentTypeError("potentials must be positive")
    return out


def parse_angle(text):
    try:
        return AngleRational.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}: {exc}") from None


def parse_ints(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list: {text!r}") from None


def parse_precision(text):
    if text in ("auto", "binary64"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("precision is auto, binary64 or a digit count") from None


# helpers ---------------------------------------------------------------------

class _Run:
    """Output directory, file naming and the manifest of one invocation."""

    def __init__(self, args, argv):
        self.args = args
        self.out = args.out
        os.makedirs(self.out, exist_ok=True)
        self.stem = args.stem or args.command
        config = {k: v for k, v in vars(args).items() if k not in ("func",)}
        self.manifest = RunManifest(args.command, argv, jsonable(config), getattr(args, "seed", None))

    def path(self, suffix):
        return os.path.join(self.out, f"{self.stem}{suffix}")

    def csv(self, header, rows, suffix=".csv"):
        p = self.path(suffix)
        write_csv(p, header, rows)
        self.manifest.add_output(p)
        return p

    def json(self, obj, suffix=".json"):
        p = self.path(suffix)
        write_json(p, obj)
        self.manifest.add_output(p)
        return p

    def figure(self, fn, *a, suffix=".png", **kw):
        p = self.path(suffix)
        fn(*a, p, **kw)
        self.manifest.notes.setdefault("figures", []).append(os.path.basename(p))
        return p

    def finish(self):
        self.manifest.write(self.path(".manifest.json"))


def _echo(obj):
    sys.stdout.write(dumps(obj))


def _point(z):
    return [float(z.real), float(z.imag)]


# subcommands -------------------------------------------------------------------

def cmd_green(args, run):
    p = MapParams(args.d, args.c)
    rec = {"d": args.d, "c": _point(args.c), "z": _point(args.z), "tol": args.tol}
    rec["t"] = float(green(p, args.z, args.tol))
    run.json(rec)
    _echo(rec)


def cmd_bottcher(args, run):
    p = MapParams(args.d, args.c)
    jet = bottcher_jet(p, args.z, "z", args.tol)
    coord = external_angle(p, args.z, args.tol)
    rec = {"d": args.d, "c": _point(args.c), "z": _point(args.z), "tol": args.tol,
           "phi": _point(jet.val), "t": float(coord.t), "theta": float(coord.theta)}
    if args.jet:
        rec["dphi_dz"] = _point(jet.der)
        rec["dphi_dc"] = _point(bottcher_jet(p, args.z, "c", args.tol).der)
    run.json(rec)
    _echo(rec)


def cmd_angle(args, run):
    p = MapParams(args.d, args.c)
    coord = external_angle(p, args.z, args.tol)
    rec = {"d": args.d, "c": _point(args.c), "z": _point(args.z), "tol": args.tol,
           "t": float(coord.t), "theta": float(coord.theta)}
    run.json(rec)
    _echo(rec)


def _trace_cached(args, plane, run):
    from .rays import trace_ray

    c = args.c if plane == "dynamical" else None
    key = cache_key(plane, args.d, args.angle, args.tstart, args.tmin, args.steps,
                    args.ray_tol, c)
    ray = None if args.no_cache else cache_load(key)
    if ray is not None:
        run.manifest.notes["cache"] = "hit"
        return ray, None
    try:
        ray = trace_ray(plane, args.d, args.angle, c, args.tstart, args.tmin, args.steps,
                        args.ray_tol, args.precision)
    except NewtonStall as exc:
        run.manifest.notes["cache"] = "miss"
        return exc.partial, exc
    if not args.no_cache:
        cache_store(key, ray)
    run.manifest.notes["cache"] = "miss"
    return ray, None


def cmd_ray(args, run):
    from .rays import landing_estimate

    plane = PLANES[args.plane]
    if plane == "dynamical" and args.c is None:
        raise UsageError("--c is required for dynamical rays")
    ray, stall = _trace_cached(args, plane, run)
    csv_path = run.path(".csv")
    write_ray_csv(csv_path, ray)
    run.manifest.add_output(csv_path)
    landing = {"plane": plane, "d": args.d, "angle": str(args.angle), "samples": len(ray)}
    est = None
    if stall is not None:
        landing["failure"] = f"NewtonStall: {stall}"
        landing["partial"] = True
        run.manifest.notes["partial_output"] = True
    elif len(ray) >= 8:
        try:
            est = landing_estimate(ray)
            landing.update(point=est.point, error_bound=est.error_bound, exponent=est.exponent,
                           model=est.model, potentials_used=est.potentials_used)
        except UnicritError as exc:
            landing["failure"] = f"{type(exc).__name__}: {exc}"
    run.json(landing, ".landing.json")
    if args.plot and len(ray):
        from .plotting import plot_ray
        run.figure(plot_ray, ray, landing=est)
    if stall is not None:
        raise stall


def cmd_transversality(args, run):
    from .transversality import transversality_sum

    s = transversality_sum(MapParams(args.d, args.c), args.tol, betas=args.betas or ())
    rec = {"d": args.d, "c": _point(args.c), "tol": args.tol, "value": _point(s.value),
           "n_terms": s.n_terms, "last_term_mag": s.last_term_mag, "tail_bound": s.tail_bound,
           "decay_ratio": s.decay_ratio, "short_fit": s.short_fit,
           "beta_sums": {repr(b): v for b, v in s.beta_sums.items()}}
    run.json(rec)
    _echo(rec)


def cmd_verify(args, run):
    from .transversality import verify_derivative_identity

    rep = verify_derivative_identity(MapParams(args.d, args.c))
    rec = {"d": args.d, "c": _point(args.c), "tol": args.tol, "lhs": _point(rep.lhs),
           "rhs": _point(rep.rhs), "rel_err": rep.rel_err, "ok": rep.rel_err <= args.tol}
    run.json(rec)
    _echo(rec)
    if rep.rel_err > args.tol:
        run.manifest.fail(RuntimeError(f"rel_err {rep.rel_err:.3g} > {args.tol:g}"), 1)
        return 1


def cmd_raylimit(args, run):
    from .transversality import ray_limit_transversality

    rows = ray_limit_transversality(args.d, args.angle, args.pots, args.tol, args.steps)
    table = [(r.t, None if r.c is None else r.c.real, None if r.c is None else r.c.imag,
              None if r.T is None else r.T.real, None if r.T is None else r.T.imag,
              r.n_terms, r.tail_bound, r.decay_ratio, r.increment, r.failure) for r in rows]
    run.csv(["t", "c_re", "c_im", "T_re", "T_im", "n_terms", "tail_bound", "decay_ratio",
             "increment", "failure"], table)
    if args.plot:
        from .plotting import plot_series
        ts = [r.t for r in rows]
        run.figure(plot_series, ts, [("|T(c) - T(prev)|", [r.increment and float(r.increment)
                                                          for r in rows])],
                   xlabel="potential t", ylabel="Cauchy increment", logy=True,
                   suffix=".increments.png")


def cmd_geodesic(args, run):
    from .rays import geodesic_ratio_experiment

    rows, pray, dray = geodesic_ratio_experiment(args.d, args.angle, args.c0, args.pots,
                                                 args.depth, args.steps)
    run.csv(["t", "gamma", "Gamma", "ratio"], rows)
    if args.plot:
        from .plotting import plot_series
        run.figure(plot_series, [r.t for r in rows], [("|gamma|/|Gamma|", [float(r.ratio) for r in rows])],
                   xlabel="potential t", ylabel="arc-length ratio", suffix=".ratio.png")


def cmd_access(args, run):
    from .geometry.access import iterated_log_access

    rows = iterated_log_access(args.d, args.angle, args.pots, args.m, args.depth, args.steps)
    run.csv(["t", "c_re", "c_im", "dist_lower", "dist_upper", "dist_est", "diam_tail",
             "arclen_tail", "functional"],
            [(r.t, r.c.real, r.c.imag, r.dist_lower, r.dist_upper, r.dist_est, r.diam_tail,
              r.arclen_tail, r.functional) for r in rows])
    if args.plot:
        from .plotting import plot_series
        run.figure(plot_series, [r.t for r in rows], [(f"m={args.m}", [r.functional for r in rows])],
                   xlabel="potential t", ylabel="access functional", suffix=".functional.png")


def cmd_lyapunov(args, run):
    from .geometry.harmonic import lyapunov

    rec = {"d": args.d, "c": _point(args.c), "n": args.n,
           "lyapunov": lyapunov(MapParams(args.d, args.c), args.n)}
    run.json(rec)
    _echo(rec)


def cmd_sample(args, run):
    from .geometry.harmonic import sample_harmonic_measure

    samples = sample_harmonic_measure(args.d, args.n, args.seed, args.tmin, args.steps, args.jobs)
    rows = []
    for s in samples:
        L = s.landing
        rows.append((f"{s.angle.numerator}/{s.angle.denominator}", float(s.angle),
                     None if L is None else L.point.real, None if L is None else L.point.imag,
                     None if L is None else L.error_bound, None if L is None else L.model,
                     s.t_min_reached, s.failure))
    run.csv(["angle", "angle_float", "landing_re", "landing_im", "error_bound", "model",
             "t_min_reached", "failure"], rows)
    run.manifest.notes["failures"] = sum(1 for s in samples if s.failure)
    if args.plot:
        from .plotting import plot_landings
        run.figure(plot_landings, samples)


def cmd_deepscan(args, run):
    from .geometry.area import area_scaling_scan

    res = args.res[0] if len(args.res) == 1 else args.res
    scan = area_scaling_scan(args.d, args.c0, args.radii, res, args.maxit)
    run.csv(["r", "area_lo", "area_hi", "ratio_hi", "cells_per_radius", "leaves"],
            [(r.r, r.area_lo, r.area_hi, r.area_hi / r.r**2, r.cells_per_radius, r.leaves)
             for r in scan.rows])
    run.json({"d": args.d, "c0": _point(args.c0), "slope": scan.slope}, ".fit.json")
    if args.plot:
        from .plotting import plot_series
        run.figure(plot_series, [r.r for r in scan.rows],
                   [("area_hi/r^2", [r.area_hi / r.r**2 for r in scan.rows]),
                    ("area_lo/r^2", [r.area_lo / r.r**2 if r.area_lo else None for r in scan.rows])],
                   xlabel="r", ylabel="area / r^2", logy=True, suffix=".ratios.png")


def _raster_from_args(args):
    from .geometry import hedgehog, porosity
    from .geometry.raster import membership_grid

    if args.synthetic:
        kind, _, num = args.synthetic.partition(":")
        if kind == "spikes":
            return hedgehog.spike_raster(int(num or 64), args.res)
        if kind == "empty":
            return hedgehog.empty_annulus_raster(args.res)
        if kind == "halfplane":
            return porosity.half_plane_raster(args.res)
        if kind == "segment":
            return porosity.segment_raster(args.res)
        raise UsageError(f"unknown synthetic raster {args.synthetic!r}")
    plane = PLANES[args.plane]
    if plane == "dynamical" and args.c is None:
        raise UsageError("--c is required for dynamical rasters")
    return membership_grid(plane, args.d, args.center, args.halfwidth, args.res,
                           args.resy or args.res, args.maxit, args.bailout, args.c)


def cmd_render(args, run):
    from .geometry.raster import write_pgm, write_sidecar

    raster = _raster_from_args(args)
    pgm = run.path(".pgm")
    write_pgm(raster, pgm)
    run.manifest.add_output(pgm)
    side = run.path(".pgm.json")
    write_sidecar(raster, side)
    run.manifest.add_output(side)
    if args.plot:
        from .plotting import plot_raster
        run.figure(plot_raster, raster)


def cmd_porosity(args, run):
    from .geometry.porosity import porosity_scan

    raster = _raster_from_args(args)
    rows = porosity_scan(raster, args.at, args.scales)
    run.csv(["r", "beta", "witness_re", "witness_im"],
            [(r.r, r.beta, r.witness.real, r.witness.imag) for r in rows])


def cmd_hedgehog(args, run):
    from .geometry.hedgehog import hedgehog_detect

    raster = _raster_from_args(args)
    m_req = args.m if args.m is not None else math.log(2) / (2 * math.pi)
    rep = hedgehog_detect(raster, args.at, args.rin, args.rout, m_req, args.eps)
    rec = rep.as_dict()
    rec.update(m_req=m_req, eps_req=args.eps)
    run.json(rec)
    _echo(rec)
    if args.plot:
        from .plotting import plot_raster
        run.figure(plot_raster, raster)


def cmd_report(args, run):
    """A small bundle of the standard experiments, each as CSV plus PNG."""
    from .geometry.access import iterated_log_access
    from .geometry.area import area_scaling_scan
    from .geometry.harmonic import sample_harmonic_measure
    from .geometry.raster import membership_grid, write_pgm
    from .plotting import plot_landings, plot_raster, plot_ray, plot_series
    from .rays import geodesic_ratio_experiment, landing_estimate
    from .transversality import ray_limit_transversality

    depth = args.depth
    pots = [2.0**-k for k in range(4, depth + 1)]
    half = AngleRational(1, 2)

    rows = ray_limit_transversality(2, half, pots)
    run.csv(["t", "T_re", "T_im", "increment"],
            [(r.t, r.T.real, r.T.imag, r.increment) for r in rows if r.T is not None],
            ".raylimit.csv")
    run.figure(plot_series, [r.t for r in rows],
               [("|T - T_prev|", [r.increment and float(r.increment) for r in rows])],
               xlabel="potential t", ylabel="Cauchy increment", logy=True,
               suffix=".raylimit.png")

    geo_pots = [2.0**-k for k in range(4, depth + 1, 2)]
    grows, pray, dray = geodesic_ratio_experiment(2, half, -2, geo_pots, 10)
    run.csv(["t", "gamma", "Gamma", "ratio"], grows, ".geodesic.csv")
    run.figure(plot_series, [r.t for r in grows], [("|gamma|/|Gamma|", [float(r.ratio) for r in grows])],
               xlabel="potential t", ylabel="arc-length ratio", suffix=".geodesic.png")
    run.figure(plot_ray, pray, landing=landing_estimate(pray), suffix=".ray.png")

    arows = iterated_log_access(2, half, geo_pots[3:] or geo_pots, 1, ray=pray)
    run.csv(["t", "dist_est", "diam_tail", "arclen_tail", "functional"],
            [(r.t, r.dist_est, r.diam_tail, r.arclen_tail, r.functional) for r in arows],
            ".access.csv")
    run.figure(plot_series, [r.t for r in arows], [("m=1", [r.functional for r in arows])],
               xlabel="potential t", ylabel="access functional", suffix=".access.png")

    radii = [2.0**-k for k in range(4, 10)]
    scan = area_scaling_scan(2, -2, radii, [2**(k + 8) for k in range(4, 10)], 2000)
    run.csv(["r", "area_lo", "area_hi", "ratio_hi"],
            [(r.r, r.area_lo, r.area_hi, r.area_hi / r.r**2) for r in scan.rows], ".deepscan.csv")
    run.figure(plot_series, radii, [("area_hi/r^2", [r.area_hi / r.r**2 for r in scan.rows])],
               xlabel="r", ylabel="area / r^2", logy=True, suffix=".deepscan.png")

    samples = sample_harmonic_measure(2, args.n, args.seed, 2.0**-10, jobs=args.jobs)
    run.csv(["angle", "landing_re", "landing_im", "error_bound", "failure"],
            [(str(s.angle), s.landing and s.landing.point.real, s.landing and s.landing.point.imag,
              s.landing and s.landing.error_bound, s.failure) for s in samples], ".sample.csv")
    run.figure(plot_landings, samples, suffix=".sample.png")

    raster = membership_grid("parameter", 2, -0.5, 1.6, 512, 512, 500)
    pgm = run.path(".mandelbrot.pgm")
    write_pgm(raster, pgm)
    run.manifest.add_output(pgm)
    run.figure(plot_raster, raster, suffix=".mandelbrot.png")


# parser ------------------------------------------------------------------------

def build_parser():
    ap = _Parser(prog="unicrit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", default=".", help="output directory (default .)")
        p.add_argument("--stem", default=None, help="output file stem (default: command name)")
        return p

    def map_flags(p):
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--c", type=parse_complex, required=True)
        p.add_argument("--z", type=parse_complex, required=True)

    for name, func, h in (("green", cmd_green, "Green function G_c(z)"),
                          ("bottcher", cmd_bottcher, "Böttcher coordinate phi_c(z)"),
                          ("angle", cmd_angle, "potential and external angle of z")):
        p = add(name, func, h)
        map_flags(p)
        p.add_argument("--tol", type=float, default=1e-12)
        if name == "bottcher":
            p.add_argument("--jet", action="store_true", help="also print derivatives")

    def ray_flags(p):
        p.add_argument("--steps", type=int, default=8, help="samples per halving of t")

    p = add("ray", cmd_ray, "trace an external ray")
    p.add_argument("--plane", choices=sorted(PLANES), default="param")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c", type=parse_complex, default=None)
    p.add_argument("--angle", type=parse_angle, required=True)
    p.add_argument("--tstart", type=_one_potential, default=1.0)
    p.add_argument("--tmin", type=_one_potential, default=2.0**-10)
    p.add_argument("--ray-tol", type=float, default=1e-10)
    p.add_argument("--precision", type=parse_precision, default="auto")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--plot", action="store_true")
    ray_flags(p)

    p = add("transversality", cmd_transversality, "transversality sum T(c)")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c", type=parse_complex, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--betas", type=lambda s: [float(v) for v in s.split(",")], default=None)

    p = add("verify", cmd_verify, "compare D_c Phi / D_z phi_c with T(c)")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c", type=parse_complex, required=True)
    p.add_argument("--tol", type=float, default=1e-6)

    p = add("raylimit", cmd_raylimit, "T along a parameter ray")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--angle", type=parse_angle, required=True)
    p.add_argument("--pots", type=parse_potentials, required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--plot", action="store_true")
    ray_flags(p)

    p = add("geodesic", cmd_geodesic, "arc-length ratio of a parameter/dynamical ray pair")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--angle", type=parse_angle, required=True)
    p.add_argument("--c0", type=parse_complex, default=None)
    p.add_argument("--pots", type=parse_potentials, required=True)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--plot", action="store_true")
    ray_flags(p)

    p = add("access", cmd_access, "distance against tail size along a parameter ray")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--angle", type=parse_angle, required=True)
    p.add_argument("--pots", type=parse_potentials, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--plot", action="store_true")
    ray_flags(p)

    p = add("lyapunov", cmd_lyapunov, "Lyapunov exponent of the critical value orbit")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c", type=parse_complex, required=True)
    p.add_argument("--n", type=int, default=10_000)

    p = add("sample", cmd_sample, "seeded harmonic-measure sample of landing points")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tmin", type=_one_potential, default=2.0**-10)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--plot", action="store_true")
    ray_flags(p)

    p = add("deepscan", cmd_deepscan, "area of M_d in shrinking disks")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--c0", type=parse_complex, required=True)
    p.add_argument("--radii", type=parse_potentials, required=True)
    p.add_argument("--res", type=parse_ints, default=[512],
                   help="cells per radius, one value or one per radius")
    p.add_argument("--maxit", type=int, default=1000)
    p.add_argument("--plot", action="store_true")

    def raster_flags(p, default_res=512):
        p.add_argument("--plane", choices=sorted(PLANES), default="param")
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--c", type=parse_complex, default=None)
        p.add_argument("--center", type=parse_complex, default=0j)
        p.add_argument("--halfwidth", type=float, default=2.0)
        p.add_argument("--res", type=int, default=default_res, help="cells across")
        p.add_argument("--resy", type=int, default=None)
        p.add_argument("--maxit", type=int, default=500)
        p.add_argument("--bailout", type=float, default=None)
        p.add_argument("--synthetic", default=None,
                       help="spikes:N, empty, halfplane or segment instead of a rendered raster")
        p.add_argument("--plot", action="store_true")

    p = add("render", cmd_render, "membership raster as PGM")
    raster_flags(p)

    p = add("porosity", cmd_porosity, "largest empty disks around a point")
    raster_flags(p)
    p.add_argument("--at", type=parse_complex, default=0j)
    p.add_argument("--scales", type=parse_potentials, required=True)

    p = add("hedgehog", cmd_hedgehog, "round-annulus hedgehog detector")
    raster_flags(p, default_res=1024)
    p.add_argument("--at", type=parse_complex, default=0j)
    p.add_argument("--rin", type=float, default=0.4)
    p.add_argument("--rout", type=float, default=0.8)
    p.add_argument("--m", type=float, default=None, help="required modulus (default log 2 / 2 pi)")
    p.add_argument("--eps", type=float, default=0.05)

    p = add("report", cmd_report, "standard experiments as CSV tables with PNG figures")
    p.add_argument("--depth", type=int, default=20, help="deepest potential 2^-depth")
    p.add_argument("--n", type=int, default=50, help="harmonic-measure samples")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--jobs", type=int, default=1)
    return ap


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv):
    """'--center -0.5,0' -> '--center=-0.5,0' so argparse does not take it for a flag."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    try:
        run = _Run(args, ["unicrit", *argv])
    except OSError as exc:
        print(f"unicrit: cannot use output directory: {exc}", file=sys.stderr)
        return 1
    code = 0
    try:
        code = args.func(args, run) or 0
    except (UnicritError, UsageError) as exc:
        code = exc.exit_code
        run.manifest.fail(exc, code)
        print(f"unicrit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
    except (ValueError, ZeroDivisionError) as exc:
        code = 1
        run.manifest.fail(exc, code)
        print(f"unicrit {args.command}: {exc}", file=sys.stderr)
    run.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
