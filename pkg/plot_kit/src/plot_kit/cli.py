"""Command-line renderer: `render --preset figN --run <dir> --out <file.png>`."""

import argparse
import sys

from .figures import FigureRequest, render
from .schema import SchemaError

EXIT_OK = 0
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render simulator preset run directories into figures",
    )
    parser.add_argument("--preset", required=True, help="layout name, fig2..fig10")
    parser.add_argument("--run", required=True, help="preset run directory")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--linear-amplitude",
        action="store_true",
        help="use a linear y axis on amplitude panels instead of log scale",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        request = FigureRequest(
            preset=args.preset,
            run_dir=args.run,
            out_path=args.out,
            log_amplitude=not args.linear_amplitude,
        )
        render(request)
    except (SchemaError, ValueError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
