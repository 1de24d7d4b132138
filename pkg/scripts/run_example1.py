#!/usr/bin/env python3
"""Run the 3-class high-dimensional benchmark (example ex1).

Defaults reproduce the stock protocol at desk scale: train/tune 300 each,
test 3000, hold-out tuning over the 2^-10..2^10 grid, soft and logistic
losses, original and refit probability estimates. Pass --test 29400 and
--replicates 100 for the full-scale protocol (slow).

Usage:
  python scripts/run_example1.py [--replicates 3] [--seed 0] [--out ex1_report.csv] [...]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from anglekit.cli import main

if __name__ == "__main__":
    sys.exit(main(["bench", "--example", "ex1", "--replicates", "3",
                   "--out", "ex1_report.csv"] + sys.argv[1:]))
