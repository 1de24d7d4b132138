#!/usr/bin/env python3
"""Run the real-data protocol (6-way split, 4-fold CV tuning) on Wine.

Expects data/wine.csv; create it with scripts/fetch_uci.py.

Usage:
  python scripts/run_wine.py [--replicates 10] [--seed 0] [--out wine_report.csv] [...]
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from anglekit.cli import main

if __name__ == "__main__":
    wine = ROOT / "data" / "wine.csv"
    if not wine.exists():
        print(f"{wine} not found; run scripts/fetch_uci.py first", file=sys.stderr)
        sys.exit(1)
    sys.exit(main(["bench", "--data", str(wine), "--label-column", "class",
                   "--replicates", "10", "--out", "wine_report.csv"] + sys.argv[1:]))
