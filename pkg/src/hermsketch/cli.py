"""Command line interface: build, update, query, merge, corr, bench.

Exit codes: 0 ok, 2 usage, 3 data, 4 incompatible sketches. Errors go to
stderr as ``hermsketch: error[<kind>]: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys

import numpy as np

from . import evaluation
from .bivariate import BivariateSketch
from .errors import IncompatibleSketchError, SketchError
from .merging import merge
from .sketch_io import ingest_stream, load, save
from .univariate import UnivariateSketch

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INCOMPATIBLE = 0, 2, 3, 4


class UsageError(Exception):
    pass


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "t", "yes", "y", "1"):
        return True
    if lowered in ("false", "f", "no", "n", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def fmt(value: float) -> str:
    return f"{value:.17g}"


def _read(args, columns: int):
    result = ingest_stream(args.input, columns=columns, on_bad_line=args.on_bad_line)
    if result.skipped:
        print(f"hermsketch: warning: skipped {result.skipped} malformed line(s)", file=sys.stderr)
    return result.values


def _feed(sketch, values, sequential: bool) -> None:
    if len(values) == 0:
        return
    if sequential or sketch.lam is not None:
        if isinstance(sketch, BivariateSketch):
            for x, y in values:
                sketch.update(x, y)
        else:
            for x in values:
                sketch.update(x)
    else:
        sketch.update_batch(values)


def cmd_build(args) -> int:
    cls = UnivariateSketch if args.type == "univariate" else BivariateSketch
    sketch = cls(args.n, args.standardize, args.lam)
    values = _read(args, 1 if args.type == "univariate" else 2)
    _feed(sketch, values, args.sequential)
    save(sketch, args.out)
    return EXIT_OK


def cmd_update(args) -> int:
    sketch = load(args.sketch)
    values = _read(args, 2 if isinstance(sketch, BivariateSketch) else 1)
    if sketch.lam is not None and not args.sequential:
        raise SketchError("exponentially weighted sketches need --sequential")
    _feed(sketch, values, args.sequential)
    save(sketch, args.sketch)
    return EXIT_OK


def cmd_query(args) -> int:
    sketch = load(args.sketch)
    at = args.at
    if isinstance(sketch, BivariateSketch):
        if args.kind == "quantile":
            raise UsageError("quantile queries need a univariate sketch")
        if len(at) % 2:
            raise UsageError("bivariate --at needs x,y pairs")
        pts = np.asarray(at, dtype=float).reshape(-1, 2)
        vals = sketch.pdf(pts, args.clipped) if args.kind == "pdf" else sketch.cdf(pts, args.clipped)
    else:
        pts = np.asarray(at, dtype=float)
        accelerate = not args.no_accelerate
        if args.kind == "pdf":
            vals = sketch.pdf(pts, args.clipped, accelerate)
        elif args.kind == "cdf":
            vals = sketch.cdf(pts, args.clipped, accelerate)
        else:
            vals = sketch.quantiles(pts, args.algorithm, accelerate)
    for v in np.atleast_1d(vals):
        print(fmt(float(v)))
    return EXIT_OK


def cmd_merge(args) -> int:
    sketches = [load(path) for path in args.sketches]
    kinds = {type(s) for s in sketches}
    if len(kinds) > 1:
        raise IncompatibleSketchError("cannot merge univariate and bivariate sketches")
    save(merge(sketches), args.out)
    return EXIT_OK


def cmd_corr(args) -> int:
    sketch = load(args.sketch)
    if not isinstance(sketch, BivariateSketch):
        raise UsageError("correlations need a bivariate sketch")
    value = sketch.spearman() if args.kind == "spearman" else sketch.kendall()
    print(fmt(value))
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.study == "quantile":
        names = args.dists.split(",")
        unknown = [d for d in names if d not in evaluation.TEST_DISTRIBUTIONS]
        if unknown:
            raise UsageError(f"unknown distribution(s): {', '.join(unknown)}")
        results = [
            evaluation.quantile_iae_study(evaluation.TEST_DISTRIBUTIONS[d], n, args.reps,
                                          args.order, args.seed, args.qmc_points)
            for d in names for n in args.sizes
        ]
    else:
        results = []
        for n in args.sizes:
            rows = evaluation.correlation_mae_study(n, args.rhos, args.reps, args.order, args.seed)
            results += rows
            for stat in ("spearman", "kendall"):
                avg, std = evaluation.summarize_mae(rows, stat)
                results.append(evaluation.StudyResult(stat, "all", n, args.reps, mae=avg, std=std))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        fields = [f.name for f in dataclasses.fields(evaluation.StudyResult)]
        writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow({k: (fmt(v) if isinstance(v, float) else ("" if v is None else v))
                             for k, v in dataclasses.asdict(r).items()})
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermsketch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def input_opts(p):
        p.add_argument("--input", default="-", help="path or - for stdin")
        p.add_argument("--on-bad-line", choices=["skip", "fail"], default="skip")
        p.add_argument("--sequential", action="store_true",
                       help="update one observation at a time")

    p = sub.add_parser("build", help="build a sketch from data")
    p.add_argument("--type", choices=["univariate", "bivariate"], default="univariate")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--standardize", type=parse_bool, default=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--out", required=True)
    input_opts(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("update", help="update a sketch file in place")
    p.add_argument("--sketch", required=True)
    input_opts(p)
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("query", help="evaluate pdf, cdf or quantiles")
    p.add_argument("--sketch", required=True)
    p.add_argument("kind", choices=["pdf", "cdf", "quantile"])
    p.add_argument("--at", type=parse_floats, required=True,
                   help="comma-separated points (x,y pairs for bivariate)")
    p.add_argument("--algorithm", choices=["interpolate", "bisection"], default="interpolate")
    p.add_argument("--no-accelerate", action="store_true")
    p.add_argument("--clipped", type=parse_bool, default=False)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("merge", help="merge sketch files")
    p.add_argument("sketches", nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("corr", help="Spearman or Kendall from a bivariate sketch")
    p.add_argument("--sketch", required=True)
    p.add_argument("kind", choices=["spearman", "kendall"])
    p.set_defaults(func=cmd_corr)

    p = sub.add_parser("bench", help="accuracy studies, CSV output")
    p.add_argument("study", choices=["quantile", "correlation"])
    p.add_argument("--sizes", type=lambda s: [int(float(v)) for v in s.split(",")], default=[10_000])
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--order", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dists", default="normal,logistic,exponential,uniform")
    p.add_argument("--rhos", type=parse_floats, default=[-0.75, -0.5, -0.25, 0.25, 0.5, 0.75])
    p.add_argument("--qmc-points", type=int, default=evaluation.DEFAULT_QMC_POINTS)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hermsketch: error[usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IncompatibleSketchError as exc:
        print(f"hermsketch: error[incompatible]: {exc}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except (SketchError, ValueError, OSError) as exc:
        print(f"hermsketch: error[data]: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
