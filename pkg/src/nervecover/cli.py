"""Command line front end.

Every command writes CSV (stdout or --out) preceded by ``#`` comment lines
carrying the tool version, the full configuration and the wall time.  Pass
--no-wall-time for byte-identical reruns.  Errors go to stderr as one JSON
record; exit codes: 0 ok, 1 configuration, 2 numerical consistency, 3 I/O.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .coeffs import CHI, FACE_COUNT, c_chi_rel, coefficient_table
from .coverage import (WORKERS_ENV, DistributionVector, EdgeMixtureSampler, UniformSampler,
                       azuma_bound, chi_distribution, chi_range, coverage_probability_closed,
                       default_workers, mc_estimate, shifted_mean)
from .errors import ConfigurationError, InputOutputError, NerveCoverError
from .metric_graph import MetricGraph, chi_rel_graph, load_graph, parse_graph
from .moments import IntegerRange
from .nerve import random_realization, realization_rows
from .simplicial import (enumerate_subcomplexes, euler_char, face_vertices, parse, to_text,
                         top_faces)
from .stevens import stevens_coverage, stevens_gap_dist, three_arc_p_vector


def parse_graph_file(path, boundary_override=None) -> MetricGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text, boundary_override, name=Path(path).stem)


# ------------------------------------------------------------ argument types

def count(text: str) -> int:
    """Accepts 1000000 or 1e6."""
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x.is_integer() or x < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return int(x)


def positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(x) and x > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def grid(text: str) -> list[float]:
    """lo:hi:step, inclusive of hi."""
    try:
        lo, hi, step = (Fraction(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("grid must look like lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("grid needs step > 0 and hi >= lo")
    n = int((hi - lo) / step)
    return [float(lo + i * step) for i in range(n + 1)]


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


# ------------------------------------------------------------ helpers

def _graph(args) -> MetricGraph:
    override = None
    if getattr(args, "boundary_override", None) is not None:
        override = [b for b in args.boundary_override.split(",") if b]
    return load_graph(args.graph, override)


def _workers(args) -> int:
    return args.workers if args.workers is not None else default_workers()


def _is_circle(X: MetricGraph):
    return len(X.edges) == 1 and X.edges[0].u == X.edges[0].v and len(X.vertices) == 1


def _dec(x: float) -> Fraction:
    # the decimal the user typed, so closed forms round once at output
    return Fraction(repr(x))


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _read_vector(path, n, form) -> DistributionVector:
    fam = enumerate_subcomplexes(n)
    vals = np.zeros(len(fam))
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputOutputError(f"cannot read {path}: {exc}") from exc
    rows = csv.reader(ln for ln in lines if ln.strip() and not ln.startswith("#"))
    for row in rows:
        if row[0] == "subcomplex":
            continue
        if len(row) < 2:
            raise ConfigurationError(f"bad vector row {row!r}")
        vals[fam.ordinal(parse(row[0], n))] = float(row[1])
    return DistributionVector(fam, form, vals)


def _three_arc_alpha(X: MetricGraph, n: int, eps: float):
    if _is_circle(X) and n == 3:
        return 2 * _dec(eps) / _dec(X.edges[0].length)
    return None


# ------------------------------------------------------------ commands

def cmd_enumerate(args):
    fam = enumerate_subcomplexes(args.n)
    rows = [(i, to_text(s), len(s.faces), euler_char(s),
             " ".join("".join(map(str, face_vertices(m))) or "{}" for m in top_faces(s)))
            for i, s in enumerate(fam)]
    return ("ordinal", "subcomplex", "faces", "chi", "top_faces"), rows


def cmd_coeffs(args):
    if args.invariant == "chi_rel":
        fam = enumerate_subcomplexes(args.n)
        rows = [(f"{to_text(s)}|{to_text(r)}", args.k, c_chi_rel(s, r, args.k))
                for s in fam for r in fam if r.bits & ~s.bits == 0]
        return ("subcomplex", "k", "coefficient"), rows
    inv = CHI if args.invariant == "chi" else FACE_COUNT(args.d)
    return ("subcomplex", "k", "coefficient"), list(coefficient_table(inv, args.n, args.k).rows())


def cmd_chi_dist(args):
    if args.p_file:
        d = _read_vector(args.p_file, args.n, args.form)
    elif args.alpha is not None:
        if args.n != 3:
            raise ConfigurationError("the closed-form vector exists for n = 3 only")
        d = three_arc_p_vector(_dec(args.alpha))
    else:
        raise ConfigurationError("give --alpha or --p-file")
    lo = args.chi_min
    if args.graph:
        lo = chi_range(_graph(args), args.n).lo
    cd = chi_distribution(d, IntegerRange(lo, args.n))
    rows = [(m, _fmt(a), _fmt(b)) for m, a, b in zip(cd.range.values, cd.p_path, cd.moment_path)]
    return ("chi", "direct_path", "moment_path"), rows


def cmd_coverage(args):
    X = _graph(args)
    rows = []
    modes = {"all": ("exact", "mc", "oracle"), "exact": ("exact",), "mc": ("mc",),
             "oracle": ("oracle",)}[args.mode]
    if "exact" in modes:
        rep = None
        if args.p_file:
            d = _read_vector(args.p_file, args.n, args.form)
            rep = coverage_probability_closed(d, X)
        else:
            a = _three_arc_alpha(X, args.n, args.eps)
            if a is not None and a < 0.5:
                rep = coverage_probability_closed(three_arc_p_vector(a), X)
            elif args.mode == "exact":
                raise ConfigurationError(
                    "exact mode needs --p-file (closed form known for 3 balls on a circle)")
        if rep is not None:
            rows.append(("exact-pipeline", _fmt(rep.probability), 0.0, 0, 0))
    if "mc" in modes or "oracle" in modes:
        res = _run_mc(args, X)
        if "mc" in modes:
            rep = res.pipeline_report()
            rows.append((rep.method, _fmt(rep.probability), _fmt(rep.stderr), rep.samples,
                         rep.rejections))
        if "oracle" in modes:
            rep = res.oracle_report()
            rows.append((rep.method, _fmt(rep.probability), _fmt(rep.stderr), rep.samples,
                         rep.rejections))
    if _is_circle(X) and args.mode == "all":
        a = 2 * _dec(args.eps) / _dec(X.edges[0].length)
        rows.append(("stevens", _fmt(stevens_coverage(args.n, min(a, Fraction(1)))), 0.0, 0, 0))
    return ("method", "probability", "stderr", "samples", "rejections"), rows


def _run_mc(args, X):
    sampler = UniformSampler()
    if args.edge_weights:
        sampler = EdgeMixtureSampler(tuple(float(w) for w in args.edge_weights.split(",")))
    return mc_estimate(X, args.n, args.eps, args.trials, seed=args.seed,
                       workers=_workers(args), sampler=sampler,
                       on_violation="keep" if args.keep_violations else "reject",
                       relax_good_cover=args.relax_good_cover)


def cmd_mc(args):
    X = _graph(args)
    res = _run_mc(args, X)
    n = args.n
    fam = enumerate_subcomplexes(n)
    rows = []
    for (a, b), c in sorted(res.pair_counts.items(),
                            key=lambda kv: (fam.index[kv[0][0]], fam.index[kv[0][1]])):
        rows.append((to_text(fam[fam.index[a]]), to_text(fam[fam.index[b]]), c,
                     _fmt(c / res.accepted)))
    args._notes = [f"accepted={res.accepted} violations={res.violations} drawn={res.drawn}"]
    return ("subcomplex", "boundary_nerve", "count", "frequency"), rows


def cmd_stevens(args):
    alphas = args.alpha_grid or ([args.alpha] if args.alpha is not None else None)
    if not alphas:
        raise ConfigurationError("give --alpha or --alpha-grid")
    rows = []
    for a in alphas:
        g = stevens_gap_dist(args.n, _dec(a))
        rows.append((repr(a), args.n, _fmt(stevens_coverage(args.n, _dec(a))), *map(_fmt, g)))
    return ("alpha", "n", "coverage", *[f"gap_{j}" for j in range(args.n + 1)]), rows


def cmd_bound(args):
    X = _graph(args)
    if args.mu0 is not None:
        mu0 = args.mu0
    elif args.alpha is not None:
        if not (_is_circle(X) and args.n == 3):
            raise ConfigurationError("--alpha needs the circle and n = 3")
        cd = chi_distribution(three_arc_p_vector(_dec(args.alpha)), IntegerRange(0, 3))
        mu0 = shifted_mean(cd)
    else:
        raise ConfigurationError("give --mu0 or --alpha")
    # mu0 is the mean shifted by chi_rel(X); report the unshifted mean as well
    c = chi_rel_graph(X)
    return ("n", "mean_chi_rel", "mu0", "chi_rel", "bound"), [
        (args.n, _fmt(float(mu0) + c), _fmt(float(mu0)), c, _fmt(azuma_bound(mu0, args.n, X)))]


def cmd_realize(args):
    X = _graph(args)
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
    r = random_realization(X, args.n, args.eps, gen)
    return ("ball", "edge", "interval_start", "interval_end"), [
        (i, e, _fmt(a), _fmt(b)) for i, e, a, b in realization_rows(r)]


def cmd_selftest(args):
    from .acceptance import run_all
    results = run_all(out=lambda line: print(line, file=sys.stderr))
    rows = [(r.number, r.name, "pass" if r.passed else "fail", r.detail) for r in results]
    args._failed = not all(r.passed for r in results)
    return ("criterion", "name", "result", "detail"), rows


# ------------------------------------------------------------ parser

def build_parser() -> ArgumentParser:
    p = ArgumentParser(prog="nervecover", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def common(sp):
        sp.add_argument("--out", help="output CSV path (default stdout)")
        sp.add_argument("--no-wall-time", action="store_true",
                        help="omit the wall-time header line")
        return sp

    def graph_args(sp):
        sp.add_argument("--graph", required=True,
                        help="graph file or builtin: circle, theta, interval, ytree")
        sp.add_argument("--boundary-override", help="comma separated degree-1 vertices")

    def mc_args(sp):
        sp.add_argument("--trials", type=count, default=10 ** 5)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default ${WORKERS_ENV} or 1)")
        sp.add_argument("--keep-violations", action="store_true",
                        help="keep samples where a ball reaches two boundary points")
        sp.add_argument("--relax-good-cover", action="store_true",
                        help="allow eps >= girth/4")
        sp.add_argument("--edge-weights", help="comma separated edge-mixture weights")

    sp = common(sub.add_parser("enumerate", help="list the labeled subcomplexes"))
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_enumerate)

    sp = common(sub.add_parser("coeffs", help="expansion coefficient table"))
    sp.add_argument("--invariant", choices=("chi", "face_count", "chi_rel"), default="chi")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, default=0)
    sp.set_defaults(func=cmd_coeffs)

    sp = common(sub.add_parser("chi-dist", help="law of chi by both paths"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=positive)
    sp.add_argument("--p-file", help="CSV of (subcomplex, value)")
    sp.add_argument("--form", choices=("atomic", "cumulative"), default="cumulative")
    sp.add_argument("--graph", help="graph fixing the lower end of the range")
    sp.add_argument("--chi-min", type=int, default=0)
    sp.set_defaults(func=cmd_chi_dist)

    sp = common(sub.add_parser("coverage", help="coverage probability"))
    graph_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=positive, required=True)
    sp.add_argument("--mode", choices=("exact", "mc", "oracle", "all"), default="all")
    sp.add_argument("--p-file")
    sp.add_argument("--form", choices=("atomic", "cumulative"), default="cumulative")
    mc_args(sp)
    sp.set_defaults(func=cmd_coverage)

    sp = common(sub.add_parser("mc", help="Monte Carlo nerve counts"))
    graph_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=positive, required=True)
    mc_args(sp)
    sp.set_defaults(func=cmd_mc)

    sp = common(sub.add_parser("stevens", help="closed-form circle coverage"))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--alpha", type=positive)
    sp.add_argument("--alpha-grid", type=grid)
    sp.set_defaults(func=cmd_stevens)

    sp = common(sub.add_parser("bound", help="concentration upper bound on coverage"))
    graph_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mu0", type=float)
    sp.add_argument("--alpha", type=positive)
    sp.set_defaults(func=cmd_bound)

    sp = common(sub.add_parser("realize", help="dump one random realization"))
    graph_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=positive, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_realize)

    sp = common(sub.add_parser("selftest", help="run the acceptance suite"))
    sp.set_defaults(func=cmd_selftest)
    return p


def _config_echo(args) -> str:
    skip = {"func", "out", "no_wall_time", "_failed", "_notes"}
    items = {k: v for k, v in vars(args).items() if k not in skip}
    if "workers" in items and items["workers"] is None:
        items["workers"] = default_workers()
    return " ".join(f"{k}={v}" for k, v in sorted(items.items()))


def run(argv=None) -> int:
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        header, rows = args.func(args)
        buf = io.StringIO()
        buf.write(f"# nervecover {__version__}\n")
        buf.write(f"# {_config_echo(args)}\n")
        for note in getattr(args, "_notes", ()):
            buf.write(f"# {note}\n")
        if not args.no_wall_time:
            buf.write(f"# wall_time_s={time.perf_counter() - t0:.3f}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)
        text = buf.getvalue()
        if args.out:
            try:
                Path(args.out).write_text(text)
            except OSError as exc:
                raise InputOutputError(f"cannot write {args.out}: {exc}") from exc
        else:
            sys.stdout.write(text)
        return 2 if getattr(args, "_failed", False) else 0
    except NerveCoverError as exc:
        rec = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        print(json.dumps(rec), file=sys.stderr)
        return exc.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
