"""Command line entry point.

    gaborlab run CONFIG [--seed S] [--json]
    gaborlab suite [--config FILE] [--out DIR] [--seed S] [--json] [--calibrate]

Exit codes: 0 success, 1 failed check or criterion, 2 invalid configuration.
"""

import argparse
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import __version__
from .config import load_config, parse_config
from .errors import ConfigError
from .experiments import run_experiment
from .io import dumps, write_json

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _u64(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer, got {text!r}") from None
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return val


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=None, help="override the config seed")
    common.add_argument("--json", action="store_true", help="print the JSON summary to stdout")

    parser = argparse.ArgumentParser(prog="gaborlab", description="Finite Gabor-analysis experiments.")
    parser.add_argument("--version", action="version", version=f"gaborlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run one configured experiment")
    run.add_argument("config", type=Path)

    suite = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    suite.add_argument("--config", type=Path, default=None)
    suite.add_argument("--out", type=Path, default=None, help="directory for suite.json")
    suite.add_argument("--calibrate", action="store_true", help="rewrite the norm-equivalence baselines first")
    return parser


def _cmd_run(args):
    cfg = load_config(args.config, seed=args.seed)
    if cfg.experiment == "Suite":
        return _suite(cfg, args.json, None, False)
    doc = run_experiment(cfg)
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        for c in doc["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            print(f"{mark}  {c['name']} = {c['value']:.3e} (limit {c['limit']:g})")
        if "error" in doc:
            print(f"FAIL  {doc['error']}", file=sys.stderr)
        print(f"{cfg.experiment}: {doc['status']} -> {cfg.output_dir / 'summary.json'}")
    return EXIT_OK if doc["status"] == "ok" else EXIT_FAIL


def _suite(cfg, as_json, out, calibrate):
    from . import suite

    if calibrate:
        path = suite.calibrate_baselines(cfg.seed)
        print(f"baselines written to {path}", file=sys.stderr)

    def progress(c):
        if not as_json:
            print(f"{'PASS' if c.passed else 'FAIL'}  [{c.id:2d}] {c.name}", flush=True)

    results, text = suite.run_suite(cfg.seed, weyl_N=cfg.N, progress=progress)
    out = out if out is not None else (cfg.output_dir if "output_dir" in cfg.raw else None)
    if out is not None:
        write_json(Path(out) / "suite.json", suite.summary_document(cfg.seed, results, cfg.N))
    failed = [c for c in results if not c.passed]
    if as_json:
        sys.stdout.write(text)
    else:
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    if failed:
        print("failed criteria: " + ", ".join(f"{c.id} ({c.name})" for c in failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _cmd_suite(args):
    if args.config is not None:
        cfg = load_config(args.config, seed=args.seed, require_experiment=False)
        if cfg.experiment != "Suite":
            raise ConfigError("experiment", f"suite expects experiment Suite (or none), got {cfg.experiment}")
    else:
        cfg = parse_config({}, seed=args.seed, require_experiment=False)
    return _suite(cfg, args.json, args.out, args.calibrate)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with threadpool_limits(limits=1):
            if args.command == "run":
                return _cmd_run(args)
            return _cmd_suite(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
