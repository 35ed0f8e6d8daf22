"""Command line: ``hml list`` and ``hml run <name>``.

Exit status: 0 when every assertion passes, 1 on an assertion failure or a
numerical error during the run, 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigInvalid, HmlError, UnknownExperiment
from .experiments import REGISTRY, ExperimentConfig, list_experiments, run_experiment, validate_config
from .hardy_ops import SEED

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _tolerance(text: str):
    key, sep, val = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        if ":" in val:
            lo, hi = val.split(":", 1)
            return key, (float(lo), float(hi))
        return key, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key!r} needs a number or LO:HI") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hml", description="Hardy-operator numerical experiments")
    sub = p.add_subparsers(dest="command", required=True)
    ls = sub.add_parser("list", help="list the registered experiments")
    ls.add_argument("--long", action="store_true", help="show criteria and a one-line summary")
    run = sub.add_parser("run", help="run one experiment and emit a JSON report")
    run.add_argument("name")
    run.add_argument("--n", type=int, default=None, help="grid size (power of two)")
    run.add_argument("--xmin", type=float, default=None, help="left end of the log window")
    run.add_argument("--xmax", type=float, default=None, help="right end of the log window")
    run.add_argument("--seed", type=int, default=SEED)
    run.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    run.add_argument("--csv", dest="csv_dir", default=None,
                     help="directory for curve CSVs and PNG figures")
    run.add_argument("--tol", action="append", type=_tolerance, default=[], metavar="KEY=VALUE",
                     help="override a named tolerance (LO:HI for ranges); repeatable")
    run.add_argument("--quiet", action="store_true", help="no per-assertion summary on stderr")
    return p


def _cmd_list(args) -> int:
    for name in list_experiments():
        if args.long:
            spec = REGISTRY[name]
            crit = ",".join(str(c) for c in spec.criteria)
            print(f"{name}\t[{crit}]\t{spec.summary}")
        else:
            print(name)
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = ExperimentConfig(experiment=args.name, n=args.n, x_min=args.xmin, x_max=args.xmax,
                           seed=args.seed, tolerances=dict(args.tol), out=args.out,
                           csv_dir=args.csv_dir)
    try:
        validate_config(cfg)
    except (UnknownExperiment, ConfigInvalid) as exc:
        print(f"hml: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_experiment(cfg)
    except HmlError as exc:
        print(f"hml: {cfg.experiment} aborted: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = report.to_json()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.csv_dir:
        from .plotting import dump_curves
        dump_curves(report.curves, cfg.csv_dir, cfg.experiment)
    if not args.quiet:
        for a in report.assertions:
            mark = "PASS" if a.passed else "FAIL"
            print(f"{mark} {cfg.experiment}:{a.name} measured={a.measured} "
                  f"tolerance={a.tolerance}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        return _cmd_list(args)
    return _cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
