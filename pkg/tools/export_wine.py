#!/usr/bin/env python3
"""Export the UCI Wine dataset bundled with scikit-learn to data/wine.csv.

The file mirrors the UCI distribution layout: the class label in the first
column followed by the 13 features, no header. Run once; the CSV is
committed so the package itself never needs scikit-learn.
"""

import os
import sys

import numpy as np
from sklearn.datasets import load_wine


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "data", "wine.csv"
    )
    bundle = load_wine()
    x = bundle.data
    y = bundle.target + 1  # UCI labels classes 1..3
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w") as fh:
        for label, row in zip(y, x):
            cells = [str(int(label))] + [repr(float(v)) for v in row]
            fh.write(",".join(cells) + "\n")
    print(f"wrote {x.shape[0]} rows x {x.shape[1]} features -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
