#!/usr/bin/env python3
"""Regenerate the plot-ready dataset bundle for one canonical regime.

Thin wrapper over `ptwell figure`; writes scan.csv, spectrum.csv,
envelope.csv, gaps.csv, and manifest.json into the output directory.

Usage: python scripts/run_figure.py <id 1..7> <out_dir> [kappa_max]
"""
import sys

sys.path.insert(0, "src")

from ptwell.cli import main as cli_main


def main():
    if len(sys.argv) < 3:
        print(__doc__)
        return 2
    argv = ["figure", "--id", sys.argv[1], "--out-dir", sys.argv[2]]
    if len(sys.argv) > 3:
        argv += ["--kappa-max", sys.argv[3]]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
