"""Command-line entry point.

    duffing-ring <subcommand> [--config FILE | --preset NAME]
                 [--out DIR] [--workers N] [--seed S]

Subcommands mirror the experiment ids; ``validate`` checks a config
without running anything. The DUFFING_RING_WORKERS environment variable
overrides the worker count (and only that).
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import (
    EXPERIMENTS,
    ConfigError,
    available_presets,
    load_config,
    load_preset,
    validate,
)
from .runner import run

WORKERS_ENV = "DUFFING_RING_WORKERS"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML experiment config")
    parser.add_argument("--preset", help="named preset (F1..F6, F5C)")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--workers", type=int, help="parallel workers")
    parser.add_argument("--seed", type=int, help="master seed (overrides config)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duffing-ring",
        description="Driven cycle-graph oscillator experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        _add_common(p)
    v = sub.add_parser("validate", help="check a config and print diagnostics")
    _add_common(v)
    return parser


def _load(args) -> "ExperimentConfig":
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset, not both")
    if args.config:
        return load_config(args.config)
    if args.preset:
        return load_preset(args.preset)
    raise ConfigError(
        f"a config source is required: --config FILE or --preset "
        f"{{{', '.join(available_presets())}}}"
    )


def _workers(args, cfg) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        return int(env)
    return cfg.workers


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        diagnostics = validate(cfg)
        for d in diagnostics:
            print(d)
        if not diagnostics:
            print("ok")
        return 2 if any(d.startswith("error:") for d in diagnostics) else 0

    if cfg.experiment != args.command:
        print(f"error: config declares experiment {cfg.experiment!r} but the "
              f"subcommand is {args.command!r}", file=sys.stderr)
        return 2

    try:
        manifest = run(cfg, out_dir=args.out, workers=_workers(args, cfg),
                       master_seed=args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for note in manifest.notes:
        print(note, file=sys.stderr)
    if cfg.experiment == "selection-rule":
        print(" ".join(str(n) for n in manifest.summary["reachable"]))
    else:
        print(f"{cfg.experiment}: wrote {len(manifest.files)} file(s) in "
              f"{manifest.wall_time_s:.1f}s")
    if manifest.n_failed:
        print(f"error: {manifest.n_failed} task(s) failed; see manifest.json",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
