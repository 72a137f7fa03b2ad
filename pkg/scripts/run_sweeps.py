#!/usr/bin/env python3
"""Reproduce the capital and interest sweeps on the fixed desk instance.

Writes plot-ready CSVs (one row per sweep point) under --out.
"""

import argparse
import sys
from pathlib import Path

from lotflow.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rc = cli_main(["sweep", "--kind", "capital",
                   "--out", str(out / "capital_sweep.csv")])
    if rc != 0:
        return rc
    return cli_main(["sweep", "--kind", "interest",
                     "--out", str(out / "interest_sweep.csv")])


if __name__ == "__main__":
    sys.exit(main())
