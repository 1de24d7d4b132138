#!/usr/bin/env python3
"""Materialize the UCI Wine data set as data/wine.csv.

The file is written with a header row, the class label in the first column
(values 1..3 as in the original wine.data), and the 13 numeric attributes
after it. scikit-learn's bundled copy is used when available; otherwise the
file is downloaded from the UCI repository.

Usage:
  python scripts/fetch_uci.py [--out data/wine.csv]
"""

import argparse
import csv
import sys
from pathlib import Path

UCI_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/wine/wine.data"
FEATURE_NAMES = [
    "alcohol", "malic_acid", "ash", "alcalinity_of_ash", "magnesium",
    "total_phenols", "flavanoids", "nonflavanoid_phenols", "proanthocyanins",
    "color_intensity", "hue", "od280_od315", "proline",
]


def rows_from_sklearn():
    from sklearn.datasets import load_wine

    bundle = load_wine()
    for features, target in zip(bundle.data, bundle.target):
        yield [str(int(target) + 1)] + [repr(float(v)) for v in features]


def rows_from_uci():
    from urllib.request import urlopen

    with urlopen(UCI_URL) as response:
        text = response.read().decode("utf-8")
    for line in text.splitlines():
        line = line.strip()
        if line:
            cells = line.split(",")
            yield [cells[0]] + cells[1:]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/wine.csv")
    args = parser.parse_args()

    try:
        rows = list(rows_from_sklearn())
        source = "scikit-learn bundled copy"
    except ImportError:
        rows = list(rows_from_uci())
        source = UCI_URL

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class"] + FEATURE_NAMES)
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows from {source} -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
