"""co2plots --in <run-dir> --fig <kind> --out <file> [--window x0,x1[,t0,t1]]"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .figures import FIGURE_KINDS, render
from .io import RunDataError


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="co2plots",
        description="Render figures from a co2fronts run directory")
    parser.add_argument("--in", dest="run_dir", required=True,
                        help="run directory holding the CSV outputs")
    parser.add_argument("--fig", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--window", default=None,
                        help="axis window x0,x1 or x0,x1,t0,t1 "
                             "(use --window=-1,2,... for negative bounds)")
    args = parser.parse_args(argv)
    window = None
    if args.window:
        try:
            window = [float(v) for v in args.window.split(",")]
        except ValueError:
            print(f"bad --window {args.window!r}", file=sys.stderr)
            return 2
    try:
        out = render(args.run_dir, args.fig, args.out, window=window)
    except (RunDataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
