"""Command-line entry point.

    pbitrc <task> [--config FILE] [--seed S]... [--out DIR] [--override key=value]... [--jobs N]
    pbitrc replay SUMMARY.json [--out DIR]

Exit status: 0 success, 2 configuration error, 3 numeric failure (and, for
``replay``, metrics that differ from the recorded ones).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import TASKS, load_config, parse_override, resolve
from .errors import ConfigError, DomainError, NumericError
from .experiments import run_experiment

log = logging.getLogger("pbitrc")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _build_parser():
    parser = argparse.ArgumentParser(prog="pbitrc", description="p-bit reservoir computing experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for task in TASKS:
        p = sub.add_parser(task)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, action="append", dest="seeds", help="run seed (repeatable)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--jobs", type=int, default=1, help="seeds run in parallel processes")
    p = sub.add_parser("replay", help="re-run the config echoed in a summary.json and compare metrics")
    p.add_argument("summary")
    p.add_argument("--out", help="output directory for the re-run")
    return parser


def _metrics_of(summary):
    return {"per_seed": summary["per_seed"], "power": summary.get("power")}


def _print_summary(summary):
    extra = summary.get("_extra", {})
    if "table" in extra:
        print(extra["table"])
    if "pbit_stats" in extra:
        print(f"{'I':>6} {'mean':>10} {'tanh(I)':>10}")
        for I, mean, _, th in extra["pbit_stats"]:
            print(f"{I:>6.2f} {mean:>10.5f} {th:>10.5f}")
    for seed, metrics in summary["per_seed"].items():
        shown = ", ".join(f"{k}={v:.6g}" for k, v in metrics.items() if isinstance(v, (int, float)))
        print(f"seed {seed}: {shown}")
    for key, agg in summary["aggregate"].items():
        print(f"{key}: median={agg['median']:.6g} min={agg['min']:.6g} max={agg['max']:.6g}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "replay":
            with open(args.summary) as fh:
                recorded = json.load(fh)
            raw = recorded["config"]
            if args.out:
                raw["output_dir"] = args.out
            cfg = resolve(raw)
            summary = run_experiment(cfg)
            same = _metrics_of(summary) == _metrics_of(recorded)
            print("metrics identical" if same else "metrics DIFFER from the recorded run")
            return EXIT_OK if same else EXIT_NUMERIC

        raw = load_config(args.config) if args.config else {}
        for item in args.override:
            parse_override(raw, item)
        if args.seeds:
            raw["seeds"] = args.seeds
        if args.out:
            raw["output_dir"] = args.out
        cfg = resolve(raw, args.command)
        log.info("running %s with seeds %s", cfg.task, list(cfg.seeds))
        summary = run_experiment(cfg, jobs=args.jobs)
        _print_summary(summary)
        print(f"wrote {cfg.output_dir}/summary.json")
        return EXIT_OK
    except (ConfigError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, DomainError, FloatingPointError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
