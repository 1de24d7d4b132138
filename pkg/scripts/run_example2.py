#!/usr/bin/env python3
"""Run the 10-class ring benchmark (example ex2) at desk scale.

Usage:
  python scripts/run_example2.py [--replicates 2] [--seed 0] [--out ex2_report.csv] [...]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from anglekit.cli import main

if __name__ == "__main__":
    sys.exit(main(["bench", "--example", "ex2", "--replicates", "2",
                   "--out", "ex2_report.csv"] + sys.argv[1:]))
