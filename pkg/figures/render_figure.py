#!/usr/bin/env python3
"""Render one figure from duffing-ring CSV artifacts.

    python render_figure.py --figure F5 --in runs/F5 --in runs/F5C --out fig5.png

``--in`` may repeat; directories are searched in order for each required
CSV. Exits nonzero with the offending file or column named if an input is
missing.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from ringfig import FigureJob, RenderError, render  # noqa: E402


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--figure", required=True,
                        choices=["F1", "F2", "F3", "F4", "F5", "F6"])
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        help="directory holding the input CSVs (repeatable)")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        render(FigureJob(figure=args.figure,
                         input_dirs=[Path(p) for p in args.inputs],
                         output=Path(args.out)))
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
