"""Command line entry point.

    opfilter verify --suite jensen-cp --dim 3 --trials 200 --seed 1 --out r.json
    opfilter replay --instance dumps/jensen-cp_seed1_trial17.json
    opfilter list-suites
    opfilter list-maps

Exit codes: 0 pass, 1 inequality failure, 2 config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, NumericalFailure, OpFilterError
from .harness.config import SuiteConfig
from .harness.runner import replay, run_suite
from .harness.suites import SUITES
from .regular_maps import CATALOG_NAMES, get_map

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opfilter", description="Randomized operator-inequality verification.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run one inequality suite")
    v.add_argument("--config", type=Path, help="JSON file with SuiteConfig fields")
    v.add_argument("--suite")
    v.add_argument("--dim", type=int)
    v.add_argument("--dim-out", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--tol-abs", type=float)
    v.add_argument("--tol-rel", type=float)
    v.add_argument("--cond-cap", type=float)
    v.add_argument("--map")
    v.add_argument("--mean")
    v.add_argument("--channel")
    v.add_argument("--n", type=int)
    v.add_argument("--workers", type=int)
    v.add_argument("--out", type=Path, help="report path (default: stdout)")
    v.add_argument("--dump-dir", type=Path,
                   help="where failing instances go (default: <out>.failures/)")

    r = sub.add_parser("replay", help="re-check a dumped instance")
    r.add_argument("--instance", type=Path, required=True)

    sub.add_parser("list-suites", help="list suite names")
    sub.add_parser("list-maps", help="list cataloged map names")
    return p


def _config_from_args(args) -> SuiteConfig:
    data = {}
    if args.config is not None:
        data = SuiteConfig.from_file(args.config).to_json()
    for key in ("suite", "dim", "dim_out", "trials", "seed", "tol_abs", "tol_rel",
                "cond_cap", "map", "mean", "channel", "n", "workers"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if "suite" not in data:
        raise ConfigError("--suite is required")
    if data["suite"] not in SUITES:
        raise ConfigError(f"unknown suite {data['suite']!r}; choose from {', '.join(SUITES)}")
    return SuiteConfig.from_dict(data)


def _verify(args, parser) -> int:
    try:
        cfg = _config_from_args(args)
        dump_dir = args.dump_dir
        if dump_dir is None and args.out is not None:
            dump_dir = args.out.with_suffix(".failures")
        report = run_suite(cfg, dump_dir)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"opfilter: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = report.dumps_json()
    if args.out is not None:
        args.out.write_text(text)
    else:
        print(text)
    print(f"{cfg.suite}: {cfg.trials} trials, {report.failures} failures, "
          f"{report.errors} errors, worst slack {report.worst_slack!r}", file=sys.stderr)
    return report.exit_code


def _replay(args) -> int:
    try:
        recorded, rec = replay(args.instance)
    except (OSError, KeyError, ValueError) as exc:
        print(f"opfilter: cannot replay {args.instance}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"opfilter: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"trial {rec.i}: recorded slack {recorded['slack']!r}, replayed slack {rec.slack!r}, "
          f"tol {rec.tol!r}, {'pass' if rec.passed else 'FAIL'}")
    return EXIT_OK if rec.passed else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            return _verify(args, parser)
        if args.command == "replay":
            return _replay(args)
        if args.command == "list-suites":
            for s in SUITES.values():
                print(f"{s.name:20s} {s.summary}")
            return EXIT_OK
        if args.command == "list-maps":
            for name in CATALOG_NAMES:
                F = get_map(name)
                flags = f"{F.curvature}, {F.domain}" + (", homogeneous" if F.homogeneous else "")
                print(f"{name:32s} arity {F.arity}  ({flags})")
            return EXIT_OK
    except NumericalFailure as exc:
        print(f"opfilter: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OpFilterError as exc:
        print(f"opfilter: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
