"""Command-line entry point.

    co2fronts <mode> --config <file> --out <dir> [--force]
    co2fronts validate --config <file>
    co2fronts batch --batch <dir> --out <dir> [--force] [--jobs N]

Exit codes: 0 success, 2 unreadable/unparseable config, 3 domain validation
failure, 4 runtime assertion during the solve.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .config import MODES, ConfigError, load_scenario, validate_scenario
from .runner import (EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION,
                     ValidationFailure, run, run_batch)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="co2fronts",
        description="Riemann solutions, wave interactions and wave-front "
                    "tracking for the two-flux plume model")
    sub = parser.add_subparsers(dest="command", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run a scenario in {mode} mode")
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--force", action="store_true",
                       help="allow writing into a non-empty directory")
    v = sub.add_parser("validate", help="check a scenario file, list violations")
    v.add_argument("--config", required=True)
    b = sub.add_parser("batch", help="run every scenario file in a directory")
    b.add_argument("--batch", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--force", action="store_true")
    b.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            scn = load_scenario(args.config)
            violations = validate_scenario(scn)
            print(json.dumps({"violations": violations}, indent=2))
            return EXIT_OK
        if args.command == "batch":
            for out in run_batch(args.batch, args.out, force=args.force,
                                 jobs=args.jobs):
                print(out)
            return EXIT_OK
        out = run(args.config, args.out, force=args.force, cli_mode=args.command)
        print(out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationFailure as exc:
        for v in exc.violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    except (AssertionError, ArithmeticError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
