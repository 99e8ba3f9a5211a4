#!/usr/bin/env python3
"""Fetch the benchmark datasets that cannot be redistributed via pip.

Wine ships with scikit-learn (see export_wine.py). The other UCI sets used
in the benchmark are bundled inside CRAN data packages, which this script
downloads and converts:

    wpbc.csv    <- TH.data::wpbc        (outcome label, then 32 features)
    vehicle.csv <- mlbench::Vehicle     (18 features, then class label)
    german.csv  <- evtree::GermanCredit (20 attributes with factors as
                                         1-based integer codes, then label)

Page-blocks has no CRAN or pip source; it is only used by the optional
long-running check, so it is skipped with a note.

Usage: python tools/fetch_datasets.py [--cran URL] [--out DIR]
Default CRAN mirror is https://cran.r-project.org (any mirror or an
artifactory proxy of one works).
"""

from __future__ import annotations

import argparse
import os
import sys
import tarfile
import tempfile
import urllib.request

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from rda_reader import INT_NA, FactorColumn, load_rda  # noqa: E402

SOURCES = [
    # (tarball candidates relative to CRAN root, member path, object name)
    (
        ["src/contrib/TH.data_1.1-5.tar.gz", "src/contrib/Archive/TH.data/TH.data_1.1-2.tar.gz"],
        "TH.data/data/wpbc.rda",
        "wpbc",
    ),
    (
        ["src/contrib/mlbench_2.1-8.tar.gz", "src/contrib/Archive/mlbench/mlbench_2.1-6.tar.gz"],
        "mlbench/data/Vehicle.rda",
        "Vehicle",
    ),
    (
        ["src/contrib/evtree_1.0-8.tar.gz", "src/contrib/Archive/evtree/evtree_1.0-7.tar.gz"],
        "evtree/data/GermanCredit.RData",
        "GermanCredit",
    ),
]


def fetch(url: str, dest: str) -> bool:
    try:
        with urllib.request.urlopen(url, timeout=120) as resp, open(dest, "wb") as out:
            out.write(resp.read())
        return os.path.getsize(dest) > 1024
    except OSError:
        return False


def frame_to_columns(frame) -> tuple[list[str], dict]:
    names = frame["__columns__"]
    return names, {name: frame[name] for name in names}


def numeric(column) -> np.ndarray:
    if isinstance(column, FactorColumn):
        return column.numeric_codes()
    arr = np.asarray(column)
    if arr.dtype.kind == "i":
        out = arr.astype(np.float64)
        out[arr == INT_NA] = np.nan  # R integer NA sentinel
        return out
    return arr.astype(np.float64)


def write_csv(path: str, columns: list[np.ndarray], impute: bool = False):
    stacked = np.column_stack(columns)
    missing = int(np.isnan(stacked).sum())
    if missing and not impute:
        raise SystemExit(f"{path}: refusing to write {missing} missing values")
    if missing:
        # median imputation keeps the published point count
        for j in range(stacked.shape[1]):
            col = stacked[:, j]
            if np.isnan(col).any():
                col[np.isnan(col)] = np.nanmedian(col)
        print(f"imputed {missing} missing cells with column medians")
    with open(path, "w") as fh:
        for row in stacked:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"wrote {stacked.shape[0]} rows x {stacked.shape[1]} cols -> {path}")


def convert_wpbc(frame, out_dir: str):
    names, cols = frame_to_columns(frame)
    features = [n for n in names if n not in ("status", "time")]
    assert len(features) == 32, f"expected 32 wpbc features, got {len(features)}"
    ordered = [numeric(cols["status"])] + [numeric(cols[n]) for n in features]
    # the 4 missing lymph-node counts of the original distribution
    write_csv(os.path.join(out_dir, "wpbc.csv"), ordered, impute=True)


def convert_vehicle(frame, out_dir: str):
    names, cols = frame_to_columns(frame)
    features = [n for n in names if n != "Class"]
    assert len(features) == 18, f"expected 18 vehicle features, got {len(features)}"
    ordered = [numeric(cols[n]) for n in features] + [numeric(cols["Class"])]
    write_csv(os.path.join(out_dir, "vehicle.csv"), ordered)


def convert_german(frame, out_dir: str):
    names, cols = frame_to_columns(frame)
    label = names[-1]  # credit_risk
    features = names[:-1]
    assert len(features) == 20, f"expected 20 german attributes, got {len(features)}"
    ordered = [numeric(cols[n]) for n in features] + [numeric(cols[label])]
    write_csv(os.path.join(out_dir, "german.csv"), ordered)


CONVERTERS = {"wpbc": convert_wpbc, "Vehicle": convert_vehicle, "GermanCredit": convert_german}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cran", default="https://cran.r-project.org")
    parser.add_argument(
        "--out", default=os.path.join(os.path.dirname(__file__), "..", "data")
    )
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    failures = []
    with tempfile.TemporaryDirectory() as tmp:
        for candidates, member, obj_name in SOURCES:
            tarball = None
            for rel in candidates:
                dest = os.path.join(tmp, os.path.basename(rel))
                if fetch(f"{args.cran.rstrip('/')}/{rel}", dest):
                    tarball = dest
                    break
            if tarball is None:
                failures.append(obj_name)
                print(f"FAILED to download a package providing {obj_name}", file=sys.stderr)
                continue
            with tarfile.open(tarball) as tf:
                tf.extract(member, tmp)
            frame = load_rda(os.path.join(tmp, member))[obj_name]
            CONVERTERS[obj_name](frame, args.out)
    print("note: page-blocks has no pip/CRAN source; the optional long-running "
          "check stays skipped unless you place data/page_blocks.csv manually")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
