"""Command-line interface.

Usage::

    coverfield fit|coverage-map|plan|detect|pipeline
        --config <path> --samples <path>
        [--mask <path>] [--out <dir>] [--detect-samples <path>]

Every failure exits nonzero with a diagnostic naming the failing stage.
"""

import argparse
import sys
from pathlib import Path

from . import pipeline
from .config import load_config
from .errors import ConfigError, StageError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverfield",
        description="Fit a field surface, map coverage radii and plan survey stations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_detect in [
        ("fit", False),
        ("coverage-map", False),
        ("plan", False),
        ("detect", True),
        ("pipeline", False),
    ]:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="TOML configuration file")
        cmd.add_argument("--samples", required=True, help="scatter samples CSV")
        cmd.add_argument("--mask", default=None, help="water/land mask CSV")
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument(
            "--detect-samples",
            default=None,
            required=needs_detect,
            help="second sample CSV to screen for anomalies",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"coverfield: stage config: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "fit":
            pipeline.run_fit(config, args.samples, out)
        elif args.command == "coverage-map":
            pipeline.run_coverage_map(config, args.samples, args.mask, out)
        elif args.command == "plan":
            pipeline.run_plan(config, args.samples, args.mask, out)
        elif args.command == "detect":
            pipeline.run_detect(config, args.samples, args.detect_samples, out)
        else:
            return pipeline.run_pipeline(
                config, args.samples, args.mask, out,
                detect_samples_path=args.detect_samples,
            )
    except StageError as exc:
        print(f"coverfield: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"coverfield: stage io: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
