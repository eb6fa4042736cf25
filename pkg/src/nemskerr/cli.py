"""Command-line front end: one subcommand per experiment.

    nemskerr fig2-sweep     [--config c.json] [--output out.csv] [--override k=v]...
    nemskerr cat-gen        ...
    nemskerr chain-validate ...
    nemskerr oracle-check   ...

Exit code 0 iff every embedded assertion of the run passed; 2 on assertion
failure; 1 on configuration or runtime errors. NEMSKERR_WORKERS controls the
sweep worker pool.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import ConfigError, default_config, load_config, parse_override
from .experiments import run_experiment

_SUBCOMMANDS = {
    "fig2-sweep": "fig2_sweep",
    "cat-gen": "cat_generation",
    "chain-validate": "chain_validation",
    "oracle-check": "oracle_check",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nemskerr",
        description="Kerr-cat simulation experiments (CSV output, deterministic runs)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON config file (defaults per experiment)")
        p.add_argument("--output", help="CSV output path (overrides config)")
        p.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config key (JSON-parsed value); repeatable",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    experiment = _SUBCOMMANDS[args.command]
    try:
        if args.config:
            cfg = load_config(args.config)
            if cfg.experiment != experiment:
                raise ConfigError(
                    f"config is for experiment {cfg.experiment!r}, "
                    f"but the {args.command} subcommand was invoked"
                )
        else:
            cfg = default_config(experiment)
        for text in args.override:
            cfg = parse_override(cfg, text)
        if args.output:
            cfg = replace(cfg, output_path=args.output)
        outcome = run_experiment(cfg)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in outcome.summary_lines():
        print(line)
    return 0 if outcome.passed else 2


if __name__ == "__main__":
    sys.exit(main())
