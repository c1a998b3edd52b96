"""plot-figs: render every known simulator CSV in a directory to images.

Exit codes: 0 success, 2 schema/validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import (FigureSpec, KIND_ASSOCIATION, KIND_SNR_CDF,
                     KIND_SUMRATE_CDF, SchemaError, render)

CSV_KINDS = {
    "association.csv": KIND_ASSOCIATION,
    "snr_cdf.csv": KIND_SNR_CDF,
    "sumrate_cdf.csv": KIND_SUMRATE_CDF,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-figs",
        description="Render association-bar and CDF figures from simulator CSVs")
    parser.add_argument("--in", dest="in_dir", type=Path, required=True,
                        help="directory holding the simulator CSV outputs")
    parser.add_argument("--out", dest="out_dir", type=Path, required=True,
                        help="directory to write images into")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    args = parser.parse_args(argv)

    found = [(name, kind) for name, kind in CSV_KINDS.items()
             if (args.in_dir / name).is_file()]
    if not found:
        print(f"error: no known CSVs ({', '.join(CSV_KINDS)}) in {args.in_dir}",
              file=sys.stderr)
        return 2
    try:
        for name, kind in found:
            out = args.out_dir / f"{Path(name).stem}.{args.format}"
            render(FigureSpec(csv_path=args.in_dir / name, kind=kind,
                              out_path=out, image_format=args.format))
            print(f"wrote {out}")
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
