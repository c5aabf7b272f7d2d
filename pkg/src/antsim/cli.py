"""Command-line interface.

Subcommands:

* run      - a single simulation, metrics as JSON on stdout
* batch    - a grid of runs, one CSV row per run
* verify   - invariant check over a reference grid of configurations
* dist     - empirical walk-length distribution vs the reference law
* scaling  - discovery-time ratios against the theoretical run time

Exit codes: 0 success, 1 invariant or verification failure, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import (STRATEGIES, ConfigError, RunConfig, TreasureSpec,
                     config_to_dict, default_seed, load_config)
from .engine import UsageError
from .geom import sample_walk_length, walk_length_pmf
from .rng import RngStream
from .runner import (batch, format_scaling_report, pmf_test, run_experiment,
                     scaling_report, write_csv)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _parse_coord(text: str):
    try:
        x, y = text.split(",")
        return (int(x), int(y))
    except ValueError:
        raise ConfigError(f"coordinate must be 'x,y', got {text!r}")


def _parse_seeds(text: str):
    """'50' means the 50 seeds 0..49; '0:50' a range; '3,7,9' a list."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi)))
    if "," in text:
        return [int(s) for s in text.split(",") if s]
    return list(range(int(text)))


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration file")
    p.add_argument("--n", type=int, help="number of agents")
    p.add_argument("--strategy", choices=STRATEGIES)
    p.add_argument("--seed", type=int, help="master seed "
                   "(default: $ANTSIM_SEED or 0)")
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--treasure", metavar="X,Y",
                   help="explicit treasure cell")
    p.add_argument("--distance", type=int,
                   help="treasure level for the on-level placements")
    p.add_argument("--on-level-index", type=int,
                   help="cell index on the level, counterclockwise from "
                        "(D, 0); implies on-level placement")
    p.add_argument("--random-on-level", action="store_true",
                   help="uniform random cell of the level")
    p.add_argument("--worst-of-level", action="store_true",
                   help="report the last-discovered cell of the level")
    p.add_argument("--trace", metavar="PATH",
                   help="write a JSONL trace of all agents")
    p.add_argument("--trace-stride", type=int)
    p.add_argument("--metrics-out", metavar="PATH",
                   help="write full metrics JSON to a file")
    p.add_argument("--assert-invariants", action="store_true")
    p.add_argument("--check-fraction", action="store_true",
                   help="also check the exploring-agent fraction bound")
    p.add_argument("--parallelism", type=int)
    p.add_argument("--shuffle-order", action="store_true",
                   help="process agents in a shuffled order each round")


def _config_from_args(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    for name in ("n", "strategy", "max_rounds", "trace_stride",
                 "parallelism"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.seed is not None:
        cfg.seed = args.seed
    elif not args.config:
        cfg.seed = default_seed()
    if args.trace:
        cfg.trace_path = args.trace
    if args.metrics_out:
        cfg.metrics_out = args.metrics_out
    if args.assert_invariants:
        cfg.assert_invariants = True
    if args.check_fraction:
        cfg.check_fraction = True
    if args.shuffle_order:
        cfg.shuffle_order = True

    placements = [bool(args.treasure), args.on_level_index is not None,
                  args.random_on_level, args.worst_of_level]
    if sum(placements) > 1:
        raise ConfigError("choose at most one treasure placement")
    if args.treasure:
        cfg.treasure = TreasureSpec("explicit", _parse_coord(args.treasure))
    elif args.on_level_index is not None:
        if args.distance is None:
            raise ConfigError("--on-level-index needs --distance")
        cfg.treasure = TreasureSpec("on-level", distance=args.distance,
                                    index=args.on_level_index)
    elif args.random_on_level:
        if args.distance is None:
            raise ConfigError("--random-on-level needs --distance")
        cfg.treasure = TreasureSpec("random-on-level",
                                    distance=args.distance)
    elif args.worst_of_level:
        if args.distance is None:
            raise ConfigError("--worst-of-level needs --distance")
        cfg.treasure = TreasureSpec("worst-of-level",
                                    distance=args.distance)
    cfg.validate()
    return cfg


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    metrics = run_experiment(cfg)
    json.dump(metrics.to_dict(), sys.stdout, indent=2, sort_keys=True)
    print()
    if cfg.assert_invariants and metrics.violations:
        print(f"{len(metrics.violations)} invariant violations",
              file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _cmd_batch(args) -> int:
    cfg = _config_from_args(args)
    seeds = _parse_seeds(args.seeds) if args.seeds else [cfg.seed]
    rows, errors = batch([cfg], seeds, workers=args.workers)
    if args.csv:
        write_csv(args.csv, rows)
    else:
        from .metrics import csv_header
        print(csv_header())
        for m in rows:
            print(m.csv_row())
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    if errors or (cfg.assert_invariants
                  and any(m.violations for m in rows)):
        return EXIT_FAILED
    return EXIT_OK


def _cmd_verify(args) -> int:
    """Invariant sweep over the reference grid of sweep configurations."""
    seeds = _parse_seeds(args.seeds)
    configs = []
    for strategy in ("rect-oracle", "rect-psta"):
        for n in (5, 20, 100):
            configs.append(RunConfig(
                n=n, strategy=strategy, max_rounds=args.rounds,
                assert_invariants=True))
    rows, errors = batch(configs, seeds, workers=args.workers)
    bad = [m for m in rows if m.violations]
    print(f"{len(rows)} runs, {len(bad)} with violations, "
          f"{len(errors)} errors")
    for m in bad:
        for v in m.violations[:3]:
            print(f"  {m.run_id} round {v.round}: {v.rule} ({v.detail})")
    for err in errors:
        print(f"  error: {err}")
    return EXIT_FAILED if bad or errors else EXIT_OK


def _cmd_dist(args) -> int:
    rng = RngStream(args.seed if args.seed is not None else default_seed())
    samples = [sample_walk_length(rng, aid) for aid in range(args.samples)]
    tv = pmf_test(samples, k_max=args.k_max)
    print(f"samples: {len(samples)}")
    print(f"total variation distance: {tv:.6f} (tolerance {args.tol})")
    for k in range(6):
        emp = sum(1 for s in samples if s == k) / len(samples)
        print(f"  P(X={k}) = {emp:.5f}  (reference {walk_length_pmf(k):.5f})")
    return EXIT_OK if tv <= args.tol else EXIT_FAILED


def _cmd_scaling(args) -> int:
    seeds = _parse_seeds(args.seeds)
    configs = []
    for n in args.n:
        for d in args.distance:
            configs.append(RunConfig(
                n=n, strategy=args.strategy, max_rounds=args.rounds,
                treasure=TreasureSpec("worst-of-level", distance=d)))
    rows, errors = batch(configs, seeds, workers=args.workers)
    print(format_scaling_report(scaling_report(rows)))
    for err in errors:
        print(f"error: {err}", file=sys.stderr)
    return EXIT_FAILED if errors else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antsim",
        description="Simulator for collaborative grid search by finite-state "
                    "agents.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation")
    _add_run_flags(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("batch", help="run one configuration over many seeds")
    _add_run_flags(p)
    p.add_argument("--seeds", help="'50' for seeds 0..49, '0:50' for a "
                                   "range, '3,7,9' for a list")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", help="write results as CSV")
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("verify",
                       help="check protocol invariants on a reference grid")
    p.add_argument("--seeds", default="0:5")
    p.add_argument("--rounds", type=int, default=400)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("dist",
                       help="compare walk lengths to the reference law")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int)
    p.add_argument("--k-max", type=int, default=30)
    p.add_argument("--tol", type=float, default=0.01)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("scaling", help="discovery-time scaling report")
    p.add_argument("--strategy", choices=STRATEGIES, default="rect-oracle")
    p.add_argument("--n", type=int, nargs="+", default=[50, 200])
    p.add_argument("--distance", type=int, nargs="+", default=[20, 50])
    p.add_argument("--seeds", default="0:10")
    p.add_argument("--rounds", type=int, default=5000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_scaling)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
