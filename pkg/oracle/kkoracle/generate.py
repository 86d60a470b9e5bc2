"""Command-line entry: regenerate the golden-vector file."""

from __future__ import annotations

import argparse
import sys

from .vectors import gen_kernels, gen_series, write_goldens


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="kkoracle-generate",
        description="Write high-precision golden vectors as JSON.",
    )
    ap.add_argument(
        "--out",
        default="goldens/golden_vectors.json",
        help="output path (default: goldens/golden_vectors.json)",
    )
    ap.add_argument(
        "--digits", type=int, default=30, help="significant digits per value (default 30)"
    )
    ns = ap.parse_args(argv)
    if ns.digits < 30:
        ap.error("--digits must be at least 30")

    kernels = gen_kernels(ns.digits)
    series, log = gen_series(ns.digits)
    records = kernels + series
    write_goldens(ns.out, records)

    for line in log:
        print(line, file=sys.stderr)
    print(
        f"wrote {len(records)} vectors to {ns.out} "
        f"({len(kernels)} kernel, {len(series)} series)",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
