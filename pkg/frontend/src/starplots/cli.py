"""Figure rendering CLI:

    starplots-render render --figure fig2 --in fig2.csv --out fig2.png

Exit codes: 0 success, 2 bad arguments/unknown figure, 3 missing series
or schema mismatch in the input CSV.
"""

from __future__ import annotations

import argparse
import sys

from .data import MissingSeriesError, SchemaError
from .recipes import known_figures, load_recipe
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="starplots-render")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a curve CSV")
    p.add_argument("--figure", required=True, choices=known_figures())
    p.add_argument("--in", dest="csv_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    args = parser.parse_args(argv)

    try:
        recipe = load_recipe(args.figure)
        result = render(recipe, args.csv_path, args.out_path)
    except (MissingSeriesError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.path} ({len(result.legend_entries)} series, "
          f"{result.y_scale} y)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
