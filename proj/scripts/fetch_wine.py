#!/usr/bin/env python3
"""Write the UCI Wine data (178 rows, 13 features, 3 cultivars) as data/wine.csv.

Uses the copy bundled with scikit-learn when available, otherwise downloads
wine.data from the UCI repository. Output columns: x1..x13,label with labels
1, 2, 3 as in the UCI file.
"""

import argparse
import csv
import io
import pathlib
import sys
import urllib.request

UCI_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/wine/wine.data"


def from_sklearn():
    try:
        from sklearn.datasets import load_wine
    except ImportError:
        return None
    bunch = load_wine()
    return [(list(map(float, x)), int(y) + 1) for x, y in zip(bunch.data, bunch.target)]


def from_uci():
    with urllib.request.urlopen(UCI_URL, timeout=30) as resp:
        text = resp.read().decode("utf-8")
    rows = []
    for rec in csv.reader(io.StringIO(text)):
        if rec:
            rows.append((list(map(float, rec[1:])), int(rec[0])))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "wine.csv"))
    parser.add_argument("--source", choices=["auto", "sklearn", "uci"], default="auto")
    args = parser.parse_args()

    rows = None
    if args.source in ("auto", "sklearn"):
        rows = from_sklearn()
    if rows is None:
        if args.source == "sklearn":
            sys.exit("scikit-learn is not installed")
        rows = from_uci()
    if len(rows) != 178 or any(len(x) != 13 for x, _ in rows):
        sys.exit(f"unexpected wine data shape: {len(rows)} rows")

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j + 1}" for j in range(13)] + ["label"])
        for x, y in rows:
            writer.writerow([repr(v) for v in x] + [y])
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
