#!/usr/bin/env python3
"""Run one of the factorial benchmark grids and write the aggregated report.

The full grids are large (864 and 1280 instances); use --max-cases for a
quick look. Set LOTFLOW_THREADS to parallelize across processes.
"""

import argparse
import sys
from pathlib import Path

from lotflow.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scheme", choices=("table2", "table5"),
                        default="table2")
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--max-cases", type=int, default=None)
    parser.add_argument("--oracle", action="store_true",
                        help="also run the exact oracle where T is small enough")
    parser.add_argument("--out", default="results/bench")
    args = parser.parse_args()
    Path(args.out).mkdir(parents=True, exist_ok=True)
    argv = ["bench", "--scheme", args.scheme, "--seed", str(args.seed),
            "--out", args.out]
    if args.max_cases is not None:
        argv += ["--max-cases", str(args.max_cases)]
    if args.oracle:
        argv.append("--oracle")
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
