"""Command-line entry point: `holosense simulate` runs a configured sweep
and writes the aggregated NMSE/CRLB table as CSV."""

import argparse
import sys

from .config import load_sweep_config
from .errors import ConfigError
from .harness import run_sweep, write_csv


def build_parser():
    parser = argparse.ArgumentParser(prog="holosense")
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a Monte Carlo sweep from a JSON config")
    sim.add_argument("--config", required=True, help="JSON scenario/sweep configuration")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.add_argument("--sweep", choices=("snr", "k", "rb"), default=None, help="override the sweep variable")
    sim.add_argument("--trials", type=int, default=None, help="override the trial count")
    sim.add_argument("--workers", type=int, default=1, help="trial worker processes")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command != "simulate":  # pragma: no cover - argparse enforces this
        return 2
    try:
        config = load_sweep_config(args.config, seed=args.seed, sweep=args.sweep, trials=args.trials)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    if args.workers < 1:
        print("config error: --workers must be positive", file=sys.stderr)
        return 2
    rows = run_sweep(config, workers=args.workers)
    write_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
