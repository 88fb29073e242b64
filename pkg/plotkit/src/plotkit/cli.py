"""Command line front end: plotkit render --kind <k> --in <paths> --out <img>.

Exit codes: 0 success, 2 bad input (missing file, schema mismatch, bad spec).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FIGURE_KINDS, FigureSpec, render
from .io import SchemaError
from . import __version__


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"plotkit {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_render = subparsers.add_parser("render", help="render one figure from exported artifacts")
    p_render.add_argument("--kind", choices=FIGURE_KINDS, required=True)
    p_render.add_argument(
        "--in",
        dest="inputs",
        type=Path,
        nargs="+",
        required=True,
        metavar="PATH",
        help="input artifact(s); basin-map takes the grid CSV and the summary JSON",
    )
    p_render.add_argument("--out", type=Path, required=True, help="output image path")
    p_render.add_argument("--title", default="", help="figure title (default: from provenance)")
    p_render.add_argument("--xlabel", default="phi1 [rad]")
    p_render.add_argument("--ylabel", default="phi2 [rad]")
    p_render.add_argument("--dpi", type=int, default=130)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            out=args.out,
            title=args.title,
            xlabel=args.xlabel,
            ylabel=args.ylabel,
            dpi=args.dpi,
        )
        out = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
