"""Command-line entry point: track, bench, compare, selftest.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from octkcf import selftest
from octkcf.config import ConfigError, load_config, parse_config
from octkcf.evaluation import (
    DataError,
    discover_sequences,
    format_table,
    load_sequence,
    read_summary,
    report_rows,
    run_benchmark,
    write_report,
)
from octkcf.tracker import TrackerConfig, normalize_mode

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _mode(text):
    try:
        return normalize_mode(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    ap = _Parser(prog="octkcf", description="KCF / OCT-KCF tracking and benchmarking")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_config_flags(p):
        p.add_argument("--config", type=Path, help="flat key=value tracker config")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override one config key (repeatable)")

    p = sub.add_parser("track", help="track one OTB-layout sequence")
    p.add_argument("--seq", type=Path, required=True)
    p.add_argument("--mode", type=_mode, default="oct_kcf")
    p.add_argument("--out", type=Path, required=True)
    add_config_flags(p)

    for name, text in (("bench", "run both modes over a dataset"),
                       ("compare", "print the precision / success / speed table")):
        p = sub.add_parser(name, help=text)
        if name == "bench":
            p.add_argument("--dataset", type=Path, required=True)
            p.add_argument("--out", type=Path, required=True)
        else:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--dataset", type=Path)
            src.add_argument("--results", type=Path, help="directory written by bench")
            p.add_argument("--out", type=Path)
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        add_config_flags(p)

    sub.add_parser("selftest", help="check fast paths against reference implementations")
    return ap


def _base_config(args):
    cfg = TrackerConfig()
    if args.config is not None:
        if not args.config.is_file():
            raise DataError(f"config file not found: {args.config}")
        cfg = load_config(args.config, cfg)
    if args.overrides:
        cfg = parse_config("\n".join(args.overrides), cfg, source="--set")
    return cfg


def _both_modes(cfg):
    return [replace(cfg, mode="kcf"), replace(cfg, mode="oct_kcf")]


def _bench(args, out):
    if args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
    seqs = discover_sequences(args.dataset)
    report = run_benchmark(seqs, _both_modes(_base_config(args)), jobs=args.jobs)
    if out is not None:
        write_report(report, out)
    failed = [r for r in report.results if r.error]
    for r in failed:
        print(f"failed: {r.sequence.name} [{r.config.name}] {r.error}", file=sys.stderr)
    return report


def cmd_track(args):
    if not args.seq.is_dir():
        raise DataError(f"--seq: not a directory: {args.seq}")
    cfg = replace(_base_config(args), mode=args.mode)
    report = run_benchmark([load_sequence(args.seq)], [cfg])
    result = report.results[0]
    if result.error:
        raise DataError(f"{args.seq}: {result.error}")
    write_report(report, args.out)
    rec = result.record
    print(f"{result.sequence.name} [{cfg.name}] frames={len(result.boxes)} "
          f"precision20={rec.precision20:.3f} auc={rec.auc:.3f} fps={rec.fps:.1f}")
    print(f"wrote {args.out / result.sequence.name / (cfg.name + '.csv')}")
    return EXIT_OK


def cmd_bench(args):
    report = _bench(args, args.out)
    print(format_table(report_rows(report)))
    return EXIT_OK


def cmd_compare(args):
    if args.results is not None:
        rows = read_summary(args.results)
        if not rows:
            raise DataError(f"{args.results}/summary.csv has no aggregate rows")
    else:
        rows = report_rows(_bench(args, args.out))
    print(format_table(rows))
    return EXIT_OK


def cmd_selftest(args):
    return EXIT_OK if selftest.run() else EXIT_DATA


COMMANDS = {"track": cmd_track, "bench": cmd_bench, "compare": cmd_compare,
            "selftest": cmd_selftest}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"octkcf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"octkcf: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"octkcf: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
